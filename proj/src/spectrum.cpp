#include "lswspec/spectrum.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lswspec/errors.hpp"

namespace lswspec {

SpectrumPiece SpectrumPiece::make_const(double lo, double hi, double value)
{
  SpectrumPiece p;
  p.lo = lo;
  p.hi = hi;
  p.kind = Kind::constant;
  p.value = value;
  return p;
}

SpectrumPiece SpectrumPiece::make_sin2(double lo, double hi, double amp,
                                       double omega, double phase,
                                       double offset)
{
  SpectrumPiece p;
  p.lo = lo;
  p.hi = hi;
  p.kind = Kind::sin_squared;
  p.amp = amp;
  p.omega = omega;
  p.phase = phase;
  p.offset = offset;
  return p;
}

double SpectrumPiece::eval(double z) const
{
  if (kind == Kind::constant)
    return value;
  const double s = std::sin(omega * std::numbers::pi * z + phase);
  return amp * s * s + offset;
}

SpectrumSpec::SpectrumSpec(int scale_count)
{
  if (scale_count < 0)
    throw std::domain_error("scale_count must be nonnegative");
  scales_.resize(static_cast<size_t>(scale_count));
}

void SpectrumSpec::add_piece(int paper_scale, const SpectrumPiece& piece)
{
  const auto scale = ScaleIndex::from_paper(paper_scale);
  if (!(piece.lo >= 0.0 && piece.lo < piece.hi && piece.hi <= 1.0))
    throw std::domain_error("piece interval must satisfy 0 <= lo < hi <= 1");
  if (piece.kind == SpectrumPiece::Kind::constant) {
    if (piece.value < 0.0)
      throw std::domain_error("constant piece must be nonnegative");
  } else {
    if (piece.amp < 0.0 || piece.offset < 0.0)
      throw std::domain_error("sin2 piece needs amp >= 0 and offset >= 0");
  }
  if (scale.depth() > scale_count())
    scales_.resize(static_cast<size_t>(scale.depth()));
  auto& d = scales_[static_cast<size_t>(scale.row())];
  if (d.table)
    throw std::domain_error("scale already tabulated; cannot mix with pieces");
  for (const auto& q : d.pieces)
    if (piece.lo < q.hi && q.lo < piece.hi)
      throw std::domain_error("overlapping pieces on one scale");
  d.pieces.push_back(piece);
  std::sort(d.pieces.begin(), d.pieces.end(),
            [](const SpectrumPiece& a, const SpectrumPiece& b) {
              return a.lo < b.lo;
            });
}

void SpectrumSpec::set_table(int paper_scale, std::vector<double> values)
{
  const auto scale = ScaleIndex::from_paper(paper_scale);
  if (values.empty())
    throw std::domain_error("tabulated scale needs at least one value");
  for (double v : values)
    if (v < 0.0)
      throw std::domain_error("tabulated spectrum values must be nonnegative");
  if (scale.depth() > scale_count())
    scales_.resize(static_cast<size_t>(scale.depth()));
  auto& d = scales_[static_cast<size_t>(scale.row())];
  if (!d.pieces.empty())
    throw std::domain_error("scale already piecewise; cannot mix with table");
  d.table = std::move(values);
}

SpectrumSpec SpectrumSpec::white_noise(int scale_count)
{
  SpectrumSpec s(scale_count);
  for (int i = 1; i <= scale_count; ++i)
    s.add_piece(-i, SpectrumPiece::make_const(0.0, 1.0, std::pow(2.0, -i)));
  return s;
}

SpectrumSpec SpectrumSpec::example_s5()
{
  SpectrumSpec s(4);
  const double qpi = 0.25 * std::numbers::pi;
  s.add_piece(-1, SpectrumPiece::make_const(0.25, 0.575, 1.0));
  s.add_piece(-1, SpectrumPiece::make_sin2(0.75, 1.0, 1.0, 2.0, -qpi, 0.5));
  s.add_piece(-3, SpectrumPiece::make_sin2(0.0, 0.25, 1.0, 1.0, -qpi, 0.5));
  s.add_piece(-4, SpectrumPiece::make_sin2(0.375, 1.0, 1.0, 5.0, -qpi, 0.5));
  return s;
}

const SpectrumSpec::ScaleDef* SpectrumSpec::def(ScaleIndex scale) const
{
  if (scale.depth() > scale_count())
    return nullptr;
  return &scales_[static_cast<size_t>(scale.row())];
}

double SpectrumSpec::eval_unchecked(const ScaleDef& d, double z) const
{
  if (d.table) {
    const auto& t = *d.table;
    const auto n = static_cast<long>(t.size());
    long bin = static_cast<long>(std::floor(z * static_cast<double>(n)));
    bin = std::clamp(bin, 0L, n - 1);
    return t[static_cast<size_t>(bin)];
  }
  for (const auto& p : d.pieces)
    if (p.contains(z))
      return p.eval(z);
  return 0.0;
}

double SpectrumSpec::evaluate(ScaleIndex scale, double z) const
{
  if (!(z > 0.0 && z < 1.0))
    throw std::domain_error("rescaled time must lie in (0,1)");
  const auto* d = def(scale);
  return d ? eval_unchecked(*d, z) : 0.0;
}

double SpectrumSpec::value_at_grid(ScaleIndex scale, long k, long T) const
{
  if (k < 0 || k >= T)
    return 0.0;
  const auto* d = def(scale);
  if (!d)
    return 0.0;
  return eval_unchecked(*d, static_cast<double>(k) / static_cast<double>(T));
}

namespace {

// z-values in (lo, hi) where sin^2(omega*pi*z + phase) has zero derivative.
std::vector<double> sin2_critical_points(const SpectrumPiece& p, double lo,
                                         double hi)
{
  std::vector<double> out;
  if (p.omega == 0.0 || p.amp == 0.0)
    return out;
  const double w = p.omega * std::numbers::pi;
  // extrema at w*z + phase = m*pi/2
  const double half_pi = 0.5 * std::numbers::pi;
  long m_lo = static_cast<long>(std::ceil((w * lo + p.phase) / half_pi));
  long m_hi = static_cast<long>(std::floor((w * hi + p.phase) / half_pi));
  for (long m = m_lo; m <= m_hi; ++m) {
    const double z = (static_cast<double>(m) * half_pi - p.phase) / w;
    if (z > lo && z < hi)
      out.push_back(z);
  }
  return out;
}

double piece_internal_tv(const SpectrumPiece& p, double lo, double hi)
{
  if (p.kind == SpectrumPiece::Kind::constant || lo >= hi)
    return 0.0;
  auto crit = sin2_critical_points(p, lo, hi);
  std::vector<double> pts;
  pts.reserve(crit.size() + 2);
  pts.push_back(lo);
  pts.insert(pts.end(), crit.begin(), crit.end());
  pts.push_back(hi);
  double tv = 0.0;
  for (size_t i = 1; i < pts.size(); ++i)
    tv += std::abs(p.eval(pts[i]) - p.eval(pts[i - 1]));
  return tv;
}

double sin2_antiderivative(const SpectrumPiece& p, double z)
{
  const double w = p.omega * std::numbers::pi;
  return (0.5 * p.amp + p.offset) * z -
         p.amp / (4.0 * w) * std::sin(2.0 * (w * z + p.phase));
}

double piece_integral(const SpectrumPiece& p, double lo, double hi)
{
  if (lo >= hi)
    return 0.0;
  if (p.kind == SpectrumPiece::Kind::constant)
    return p.value * (hi - lo);
  if (p.omega == 0.0)
    return p.eval(lo) * (hi - lo);
  return sin2_antiderivative(p, hi) - sin2_antiderivative(p, lo);
}

} // namespace

SpectrumSpec::TotalVariation SpectrumSpec::total_variation(ScaleIndex scale) const
{
  const auto* d = def(scale);
  TotalVariation tv;
  if (!d)
    return tv;
  if (d->table) {
    const auto& t = *d->table;
    for (size_t i = 1; i < t.size(); ++i)
      tv.value += std::abs(t[i] - t[i - 1]);
    tv.exact = false;
    return tv;
  }

  // Oscillation inside each piece, restricted to (0,1).
  for (const auto& p : d->pieces)
    tv.value += piece_internal_tv(p, std::max(p.lo, 0.0), std::min(p.hi, 1.0));

  // Jumps at piece boundaries strictly inside (0,1). A boundary at 0 or 1
  // is invisible to partitions of the open interval.
  std::vector<double> edges;
  for (const auto& p : d->pieces) {
    if (p.lo > 0.0 && p.lo < 1.0)
      edges.push_back(p.lo);
    if (p.hi > 0.0 && p.hi < 1.0)
      edges.push_back(p.hi);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (double e : edges) {
    double left = 0.0;
    double right = 0.0;
    for (const auto& p : d->pieces) {
      if (p.lo < e && e <= p.hi)
        left = p.eval(e);
      if (p.contains(e))
        right = p.eval(e);
    }
    tv.value += std::abs(right - left);
  }
  return tv;
}

double SpectrumSpec::integral_average(ScaleIndex scale, double lo,
                                      double hi) const
{
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0))
    throw std::domain_error("integral range must satisfy 0 <= lo < hi <= 1");
  const auto* d = def(scale);
  if (!d)
    return 0.0;
  double total = 0.0;
  if (d->table) {
    const auto& t = *d->table;
    const auto n = static_cast<double>(t.size());
    for (size_t b = 0; b < t.size(); ++b) {
      const double blo = static_cast<double>(b) / n;
      const double bhi = static_cast<double>(b + 1) / n;
      const double a = std::max(lo, blo);
      const double c = std::min(hi, bhi);
      if (a < c)
        total += t[b] * (c - a);
    }
  } else {
    for (const auto& p : d->pieces)
      total += piece_integral(p, std::max(lo, p.lo), std::min(hi, p.hi));
  }
  return total / (hi - lo);
}

double SpectrumSpec::sup_value(ScaleIndex scale) const
{
  const auto* d = def(scale);
  if (!d)
    return 0.0;
  double sup = 0.0;
  if (d->table) {
    for (double v : *d->table)
      sup = std::max(sup, v);
    return sup;
  }
  for (const auto& p : d->pieces) {
    if (p.kind == SpectrumPiece::Kind::constant) {
      sup = std::max(sup, p.value);
      continue;
    }
    sup = std::max({sup, p.eval(p.lo), p.eval(p.hi)});
    for (double z : sin2_critical_points(p, p.lo, p.hi))
      sup = std::max(sup, p.eval(z));
  }
  return sup;
}

bool SpectrumSpec::is_tabulated(ScaleIndex scale) const
{
  const auto* d = def(scale);
  return d && d->table.has_value();
}

// ---------------------------------------------------------------------------
// Text format parser.
// ---------------------------------------------------------------------------

namespace {

class LineScanner {
public:
  LineScanner(std::string_view text, int line) : text_(text), line_(line) {}

  void skip_ws()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool done()
  {
    skip_ws();
    return pos_ >= text_.size();
  }

  int column() const { return static_cast<int>(pos_) + 1; }

  [[noreturn]] void fail(const std::string& msg) const
  {
    throw ParseError(msg, line_, column());
  }

  [[noreturn]] void fail_at(int column, const std::string& msg) const
  {
    throw ParseError(msg, line_, column);
  }

  char peek()
  {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c)
  {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept(char c)
  {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string word()
  {
    skip_ws();
    const size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start)
      fail("expected a keyword");
    return std::string(text_.substr(start, pos_ - start));
  }

  //! Number with an optional 'pi' suffix meaning multiples of pi.
  double number()
  {
    skip_ws();
    const size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
      ++pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E' ||
            ((text_[pos_] == '+' || text_[pos_] == '-') &&
             (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
      ++pos_;
    if (pos_ == start)
      fail("expected a number");
    double v = 0.0;
    try {
      v = std::stod(std::string(text_.substr(start, pos_ - start)));
    } catch (const std::exception&) {
      pos_ = start;
      fail("malformed number");
    }
    if (text_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      v *= std::numbers::pi;
    }
    return v;
  }

  long integer()
  {
    const double v = number();
    const long n = static_cast<long>(std::llround(v));
    if (static_cast<double>(n) != v)
      fail("expected an integer");
    return n;
  }

private:
  std::string_view text_;
  size_t pos_ = 0;
  int line_;
};

SpectrumPiece parse_piece(LineScanner& sc)
{
  sc.expect('[');
  const double lo = sc.number();
  sc.expect(',');
  const double hi = sc.number();
  sc.expect(')');
  sc.expect(',');
  const std::string kind = sc.word();
  if (kind == "const") {
    return SpectrumPiece::make_const(lo, hi, sc.number());
  }
  if (kind == "sin2") {
    double amp = 1.0, omega = 1.0, phase = 0.0, offset = 0.0;
    bool saw_any = false;
    while (!sc.done() && sc.peek() != ';') {
      const int col = sc.column();
      const std::string name = sc.word();
      sc.expect('=');
      const double v = sc.number();
      if (name == "amp")
        amp = v;
      else if (name == "omega")
        omega = v;
      else if (name == "phase")
        phase = v;
      else if (name == "offset")
        offset = v;
      else
        sc.fail_at(col, "unknown sin2 parameter '" + name + "'");
      saw_any = true;
    }
    if (!saw_any)
      sc.fail("sin2 needs at least one parameter");
    return SpectrumPiece::make_sin2(lo, hi, amp, omega, phase, offset);
  }
  sc.fail("unknown piece kind '" + kind + "' (want const or sin2)");
}

} // namespace

SpectrumSpec SpectrumSpec::parse(std::string_view text)
{
  SpectrumSpec spec;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
      pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    ++line_no;
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;

    if (const size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    LineScanner sc(line, line_no);
    if (sc.done())
      continue;

    const std::string head = sc.word();
    if (head != "scale")
      sc.fail("each definition line must start with 'scale'");
    sc.expect('=');
    const long paper_scale = sc.integer();
    if (paper_scale >= 0)
      sc.fail("scale must be negative");

    // make the scale exist even if no pieces follow (inactive scale)
    if (-paper_scale > spec.scale_count())
      spec.scales_.resize(static_cast<size_t>(-paper_scale));

    while (sc.accept(';')) {
      if (sc.done())
        break;
      const int col = sc.column();
      const std::string key = sc.word();
      if (key != "piece")
        throw ParseError("expected 'piece'", line_no, col);
      sc.expect('=');
      SpectrumPiece piece = parse_piece(sc);
      try {
        spec.add_piece(static_cast<int>(paper_scale), piece);
      } catch (const std::domain_error& e) {
        throw ParseError(e.what(), line_no, col);
      }
    }
    if (!sc.done())
      sc.fail("trailing input (separate clauses with ';')");
  }
  return spec;
}

SpectrumSpec SpectrumSpec::parse_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open spectrum file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line(), e.column());
  }
}

} // namespace lswspec
