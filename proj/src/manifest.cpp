#include "lswspec/manifest.hpp"

#include <fstream>
#include <sstream>

#include "lswspec/csv.hpp"
#include "lswspec/errors.hpp"

namespace lswspec {

namespace {

std::string scales_to_string(const std::vector<int>& scales)
{
  std::string s;
  for (size_t i = 0; i < scales.size(); ++i) {
    if (i)
      s += ',';
    s += std::to_string(scales[i]);
  }
  return s;
}

std::vector<int> scales_from_string(const std::string& s)
{
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(std::stoi(item));
  if (out.empty())
    throw InputError("manifest: empty scale list");
  return out;
}

} // namespace

void RunManifest::write(const std::string& path) const
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw InputError("cannot write manifest: " + path);
  out << "command = " << command << '\n';
  out << "spec = " << spec_path << '\n';
  out << "input = " << input_path << '\n';
  out << "out = " << output_dir << '\n';
  out << "seed = " << seed << '\n';
  out << "t = " << t << '\n';
  out << "reps = " << replications << '\n';
  out << "scales = " << scales_to_string(scales) << '\n';
  out << "points = " << points << '\n';
  out << "eta = " << format_double(eta_scale) << '\n';
  out << "kt = " << format_double(k_t) << '\n';
  out << "delta = " << delta_points << '\n';
  out << "ratio = " << format_double(grid_ratio) << '\n';
  out << "c2 = " << format_double(c2) << '\n';
  out << "mt = " << m_t << '\n';
  out << "window = " << window_len << '\n';
  out << "variance = " << variance_mode << '\n';
  out << "threads = " << threads << '\n';
  out << "maxdepth = " << max_depth << '\n';
  out << "dump_periodogram = " << (dump_periodogram ? 1 : 0) << '\n';
  if (!inject_fault.empty())
    out << "inject_fault = " << inject_fault << '\n';
}

RunManifest RunManifest::read(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError("cannot open manifest: " + path);
  RunManifest m;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line[0] == '#')
      continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError("manifest line " + std::to_string(line_no) +
                       ": expected key = value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "command")
        m.command = val;
      else if (key == "spec")
        m.spec_path = val;
      else if (key == "input")
        m.input_path = val;
      else if (key == "out")
        m.output_dir = val;
      else if (key == "seed")
        m.seed = std::stoull(val);
      else if (key == "t")
        m.t = std::stol(val);
      else if (key == "reps")
        m.replications = std::stol(val);
      else if (key == "scales")
        m.scales = scales_from_string(val);
      else if (key == "points")
        m.points = std::stol(val);
      else if (key == "eta")
        m.eta_scale = std::stod(val);
      else if (key == "kt")
        m.k_t = std::stod(val);
      else if (key == "delta")
        m.delta_points = std::stol(val);
      else if (key == "ratio")
        m.grid_ratio = std::stod(val);
      else if (key == "c2")
        m.c2 = std::stod(val);
      else if (key == "mt")
        m.m_t = std::stol(val);
      else if (key == "window")
        m.window_len = std::stol(val);
      else if (key == "variance")
        m.variance_mode = val;
      else if (key == "threads")
        m.threads = std::stoi(val);
      else if (key == "maxdepth")
        m.max_depth = std::stol(val);
      else if (key == "dump_periodogram")
        m.dump_periodogram = (val == "1" || val == "true");
      else if (key == "inject_fault")
        m.inject_fault = val;
      else
        throw InputError("manifest line " + std::to_string(line_no) +
                         ": unknown key '" + key + "'");
    } catch (const InputError&) {
      throw;
    } catch (const std::exception&) {
      throw InputError("manifest line " + std::to_string(line_no) +
                       ": bad value for '" + key + "'");
    }
  }
  return m;
}

} // namespace lswspec
