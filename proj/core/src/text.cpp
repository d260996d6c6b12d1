#include "dynsense/text.hpp"

#include <algorithm>
#include <cctype>

namespace dynsense::text {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::uint64_t parse_u64(std::string_view s, std::size_t base_pos) {
  if (s.empty()) throw ParseError("expected a number", base_pos);
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!is_digit(s[i])) throw ParseError("expected a digit", base_pos + i);
    const std::uint64_t d = static_cast<std::uint64_t>(s[i] - '0');
    if (v > (UINT64_MAX - d) / 10) throw ParseError("number too large", base_pos + i);
    v = v * 10 + d;
  }
  return v;
}

u128 parse_u128(std::string_view s, std::size_t base_pos) {
  if (s.empty()) throw ParseError("expected a number", base_pos);
  u128 v = 0;
  const u128 lim = ~u128{0};
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!is_digit(s[i])) throw ParseError("expected a digit", base_pos + i);
    const unsigned d = static_cast<unsigned>(s[i] - '0');
    if (v > (lim - d) / 10) throw ParseError("number too large", base_pos + i);
    v = v * 10 + d;
  }
  return v;
}

std::int64_t parse_i64(std::string_view s, std::size_t base_pos) {
  bool neg = false;
  std::size_t off = 0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    off = 1;
  }
  const std::uint64_t mag = parse_u64(s.substr(off), base_pos + off);
  if (mag > static_cast<std::uint64_t>(INT64_MAX))
    throw ParseError("number too large", base_pos);
  const auto v = static_cast<std::int64_t>(mag);
  return neg ? -v : v;
}

}  // namespace

std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::string u128_to_hex(u128 v, unsigned bits) {
  const unsigned digits = (bits + 3) / 4;
  std::string s(digits, '0');
  for (unsigned i = 0; i < digits; ++i) {
    const unsigned nib = static_cast<unsigned>(v & 0xf);
    s[digits - 1 - i] = nib < 10 ? static_cast<char>('0' + nib)
                                 : static_cast<char>('a' + nib - 10);
    v >>= 4;
  }
  return s;
}

std::string format_dyadic(const Dyadic& d) {
  return u128_to_string(d.numerator()) + "/2^" + std::to_string(d.exponent());
}

ParsedDyadic parse_dyadic(std::string_view s, unsigned bits) {
  if (s.empty()) throw ParseError("empty dyadic literal", 0);
  const std::size_t slash = s.find('/');
  if (slash != std::string_view::npos) {
    const std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    const u128 n = parse_u128(num, 0);
    if (den.rfind("2^", 0) == 0) {
      const std::uint64_t e = parse_u64(den.substr(2), slash + 3);
      if (e > 100000) throw ParseError("exponent too large", slash + 3);
      return {Dyadic::from_parts(n, static_cast<std::uint32_t>(e)), false};
    }
    const u128 d = parse_u128(den, slash + 1);
    if (d == 0 || (d & (d - 1)) != 0)
      throw ParseError("denominator must be a power of two", slash + 1);
    return {Dyadic::from_parts(
                n, static_cast<std::uint32_t>(dynsense::detail::countr_zero_u128(d))),
            false};
  }

  // decimal: round to nearest at `bits` fractional bits, ties up
  const std::size_t dot = s.find('.');
  const std::string_view ip = dot == std::string_view::npos ? s : s.substr(0, dot);
  const std::string_view fp =
      dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  const std::uint64_t whole = ip.empty() ? 0 : parse_u64(ip, 0);
  if (whole > 1 || (whole == 1 && !fp.empty() && fp.find_first_not_of('0') !=
                                                     std::string_view::npos))
    throw ParseError("dyadic value must lie in [0, 1]", 0);
  if (fp.size() > 19) throw ParseError("too many decimal digits (max 19)", dot + 20);
  if (whole == 1) return {Dyadic::one(), false};
  if (fp.empty()) return {whole == 0 ? Dyadic::zero() : Dyadic::one(), false};

  const std::uint64_t frac = parse_u64(fp, dot + 1);
  std::uint64_t den = 1;
  for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
  // round(frac * 2^bits / den)
  const dynsense::detail::U256 scaled =
      dynsense::detail::U256::mul(frac, 1).shl(bits);
  // divide the 256-bit value by den with rounding
  u128 q_hi = scaled.hi / den;
  u128 r = scaled.hi % den;
  // long division over the low limb in two 64-bit halves
  u128 cur = (r << 64) | (scaled.lo >> 64);
  const u128 q_mid = cur / den;
  r = cur % den;
  cur = (r << 64) | (scaled.lo & ((u128{1} << 64) - 1));
  const u128 q_lo = cur / den;
  r = cur % den;
  u128 q = (q_mid << 64) | q_lo;
  const bool rounded = r != 0;
  if (q_hi != 0) throw ParseError("dyadic value out of range", 0);
  if (2 * r >= den) {  // ties round up
    if (q == ~u128{0}) return {Dyadic::one(), rounded};
    ++q;
  }
  if (bits < 128 && q == (u128{1} << bits)) return {Dyadic::one(), rounded};
  return {Dyadic::from_parts(q, bits), rounded};
}

std::string format_window_set(const families::WindowSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.elements().size(); ++i) {
    if (i > 0) out.push_back(',');
    out += std::to_string(s.elements()[i]);
  }
  out.push_back('@');
  out += std::to_string(s.window_end());
  return out;
}

families::WindowSet parse_window_set(std::string_view s) {
  const std::size_t at = s.rfind('@');
  if (at == std::string_view::npos)
    throw ParseError("window set literal needs a '@N' suffix", s.size());
  const std::int64_t window = parse_i64(s.substr(at + 1), at + 1);
  std::vector<families::Elem> elems;
  std::string_view body = s.substr(0, at);
  std::size_t pos = 0;
  while (!body.empty()) {
    const std::size_t comma = body.find(',');
    const std::string_view tok =
        comma == std::string_view::npos ? body : body.substr(0, comma);
    if (tok.empty()) throw ParseError("empty element", pos);
    elems.push_back(parse_i64(tok, pos));
    if (comma == std::string_view::npos) break;
    body = body.substr(comma + 1);
    pos += comma + 1;
  }
  try {
    return families::WindowSet(window, std::move(elems));
  } catch (const UsageError& e) {
    throw ParseError(e.what(), 0);
  }
}

std::string format_witness(const families::FamilyWitness& w) {
  return std::visit(
      [](const auto& v) -> std::string {
        using W = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<W, families::BlockWitness>) {
          return "block:" + std::to_string(v.start) + "+" + std::to_string(v.length);
        } else if constexpr (std::is_same_v<W, families::FiniteIpWitness>) {
          std::string s = "ip:[";
          for (std::size_t i = 0; i < v.gens.gens.size(); ++i) {
            if (i > 0) s.push_back(',');
            s += std::to_string(v.gens.gens[i]);
          }
          return s + "]";
        } else if constexpr (std::is_same_v<W, families::FiniteDiffWitness>) {
          std::string s = "diff:[";
          for (std::size_t i = 0; i < v.base.size(); ++i) {
            if (i > 0) s.push_back(',');
            s += std::to_string(v.base[i]);
          }
          return s + "]";
        } else {
          return "syndetic:" + std::to_string(v.bound);
        }
      },
      w);
}

std::string format_circle_point(const systems::CircleCoord& c) {
  return "0x" + u128_to_hex(c.raw(), c.bits());
}

systems::CircleCoord parse_circle_point(std::string_view s, unsigned bits) {
  if (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0) {
    const std::string_view hex = s.substr(2);
    if (hex.empty()) throw ParseError("empty hex fraction", 2);
    if (hex.size() * 4 > bits)
      throw ParseError("hex fraction finer than the precision", 2);
    u128 v = 0;
    for (std::size_t i = 0; i < hex.size(); ++i) {
      const char c = hex[i];
      unsigned nib = 0;
      if (c >= '0' && c <= '9')
        nib = static_cast<unsigned>(c - '0');
      else if (c >= 'a' && c <= 'f')
        nib = static_cast<unsigned>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F')
        nib = static_cast<unsigned>(c - 'A' + 10);
      else
        throw ParseError("expected a hex digit", 2 + i);
      v = (v << 4) | nib;
    }
    const unsigned shift = bits - static_cast<unsigned>(hex.size() * 4);
    return systems::CircleCoord(shift >= 128 ? 0 : (v << shift), bits);
  }
  const ParsedDyadic d = parse_dyadic(s, bits);
  return systems::CircleCoord::from_dyadic(d.value, bits);
}

std::string format_torus_point(const systems::TorusPoint& p) {
  std::string out;
  for (int i = 0; i < p.dim(); ++i) {
    if (i > 0) out.push_back('/');
    out += format_circle_point(p.coord(i));
  }
  return out;
}

systems::TorusPoint parse_torus_point(std::string_view s, unsigned bits,
                                      int expected_dim) {
  std::vector<systems::CircleCoord> coords;
  std::size_t pos = 0;
  while (true) {
    const std::size_t slash = s.find('/', pos);
    const std::string_view tok = slash == std::string_view::npos
                                     ? s.substr(pos)
                                     : s.substr(pos, slash - pos);
    if (tok.empty()) throw ParseError("empty coordinate", pos);
    coords.push_back(parse_circle_point(tok, bits));
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  if (expected_dim >= 0 && static_cast<int>(coords.size()) != expected_dim)
    throw ParseError("wrong number of coordinates", 0);
  return systems::TorusPoint(std::move(coords));
}

namespace {

systems::SymbolicPoint parse_symbolic(std::string_view s, std::size_t& pos);

void skip_spaces(std::string_view s, std::size_t& pos) {
  while (pos < s.size() && s[pos] == ' ') ++pos;
}

void expect(std::string_view s, std::size_t& pos, char c) {
  if (pos >= s.size() || s[pos] != c)
    throw ParseError(std::string("expected '") + c + "'", pos);
  ++pos;
}

std::string take_word(std::string_view s, std::size_t& pos) {
  std::string w;
  while (pos < s.size() &&
         (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
    w.push_back(s[pos++]);
  return w;
}

systems::SymbolicPoint parse_symbolic(std::string_view s, std::size_t& pos) {
  skip_spaces(s, pos);
  const std::size_t word_pos = pos;
  const std::string word = take_word(s, pos);
  if (word == "omega") return systems::SymbolicPoint::morse_omega();
  if (word == "eta") return systems::SymbolicPoint::eta();
  if (word == "periodic") {
    expect(s, pos, '(');
    std::string bitsw;
    while (pos < s.size() && (s[pos] == '0' || s[pos] == '1')) bitsw.push_back(s[pos++]);
    if (bitsw.empty()) throw ParseError("periodic word must be nonempty", pos);
    expect(s, pos, ')');
    return systems::SymbolicPoint::periodic(bitsw);
  }
  if (word == "flip") {
    expect(s, pos, '(');
    systems::SymbolicPoint inner = parse_symbolic(s, pos);
    skip_spaces(s, pos);
    expect(s, pos, ')');
    return inner.flipped();
  }
  if (word == "shift") {
    expect(s, pos, '(');
    skip_spaces(s, pos);
    std::size_t start = pos;
    std::string num;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) num.push_back(s[pos++]);
    while (pos < s.size() && is_digit(s[pos])) num.push_back(s[pos++]);
    const std::int64_t k = parse_i64(num, start);
    skip_spaces(s, pos);
    expect(s, pos, ',');
    systems::SymbolicPoint inner = parse_symbolic(s, pos);
    skip_spaces(s, pos);
    expect(s, pos, ')');
    return inner.shifted(k);
  }
  throw ParseError("unknown symbolic rule '" + word + "'", word_pos);
}

}  // namespace

systems::SymbolicPoint parse_symbolic_point(std::string_view s) {
  std::size_t pos = 0;
  systems::SymbolicPoint p = parse_symbolic(s, pos);
  skip_spaces(s, pos);
  if (pos != s.size()) throw ParseError("trailing characters", pos);
  return p;
}

std::string format_symbolic_point(const systems::SymbolicPoint& p) {
  using K = systems::SymbolicPoint::Kind;
  switch (p.kind()) {
    case K::morse_omega:
      return "omega";
    case K::eta:
      return "eta";
    case K::periodic: {
      std::string s = "periodic(";
      for (const int b : p.word()) s.push_back(static_cast<char>('0' + b));
      return s + ")";
    }
    case K::flip:
      return "flip(" + format_symbolic_point(p.inner()) + ")";
    case K::shift:
      return "shift(" + std::to_string(p.shift_offset()) + ", " +
             format_symbolic_point(p.inner()) + ")";
  }
  throw InternalConsistencyError("unhandled symbolic kind");
}

std::string format_metric_value(const systems::MetricValue& v) {
  return v.exact ? format_dyadic(v.bound) : "<=" + format_dyadic(v.bound);
}

std::string format_rational(const Rational& r) {
  return std::to_string(r.num()) + "/" + std::to_string(r.den());
}

Rational parse_rational(std::string_view s) {
  const std::size_t slash = s.find('/');
  if (slash == std::string_view::npos) return Rational{parse_i64(s, 0)};
  return Rational{parse_i64(s.substr(0, slash), 0),
                  parse_i64(s.substr(slash + 1), slash + 1)};
}

namespace {

systems::CircleCoord parse_alpha(std::string_view s, unsigned bits, bool& rounded,
                                 std::size_t base_pos) {
  rounded = false;
  if (s == "sqrt2-1") return systems::CircleCoord::sqrt2_minus_one(bits);
  try {
    if (s.rfind("0x", 0) == 0) return parse_circle_point(s, bits);
    const ParsedDyadic d = parse_dyadic(s, bits);
    rounded = d.rounded;
    return systems::CircleCoord::from_dyadic(d.value, bits);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), base_pos);
  }
}

}  // namespace

SystemSpec parse_system_literal(std::string_view s, unsigned bits) {
  SystemSpec spec;
  if (s == "morse") {
    spec.kind = SystemSpec::Kind::morse;
    spec.alpha = systems::CircleCoord::zero(bits);
    return spec;
  }
  if (s.rfind("rotation:", 0) == 0) {
    spec.kind = SystemSpec::Kind::rotation;
    spec.alpha = parse_alpha(s.substr(9), bits, spec.alpha_rounded, 9);
    return spec;
  }
  if (s.rfind("skew:", 0) == 0) {
    spec.kind = SystemSpec::Kind::skew;
    const std::string_view rest = s.substr(5);
    const std::size_t colon = rest.find(':');
    if (colon == std::string_view::npos)
      throw ParseError("skew literal needs 'skew:<d>:<alpha>'", 5);
    const std::int64_t d = parse_i64(rest.substr(0, colon), 5);
    if (d < 1 || d > 8) throw ParseError("skew dimension must be in [1, 8]", 5);
    spec.dim = static_cast<int>(d);
    spec.alpha = parse_alpha(rest.substr(colon + 1), bits, spec.alpha_rounded,
                             5 + colon + 1);
    return spec;
  }
  throw ParseError("unknown system literal (rotation:<a>, skew:<d>:<a>, morse)", 0);
}

systems::CircleBall parse_circle_ball(std::string_view s, unsigned bits) {
  if (s.rfind("ball:", 0) != 0) throw ParseError("expected 'ball:<point>:<radius>'", 0);
  const std::string_view rest = s.substr(5);
  const std::size_t colon = rest.rfind(':');
  if (colon == std::string_view::npos)
    throw ParseError("expected 'ball:<point>:<radius>'", s.size());
  const systems::CircleCoord center = parse_circle_point(rest.substr(0, colon), bits);
  const Dyadic radius = parse_dyadic(rest.substr(colon + 1), bits).value;
  if (radius.is_zero()) throw ParseError("radius must be positive", 5 + colon + 1);
  return systems::CircleBall{center, radius};
}

systems::TorusBall parse_torus_ball(std::string_view s, unsigned bits, int dim) {
  if (s.rfind("ball:", 0) != 0) throw ParseError("expected 'ball:<point>:<radius>'", 0);
  const std::string_view rest = s.substr(5);
  const std::size_t colon = rest.rfind(':');
  if (colon == std::string_view::npos)
    throw ParseError("expected 'ball:<point>:<radius>'", s.size());
  const systems::TorusPoint center =
      parse_torus_point(rest.substr(0, colon), bits, dim);
  const Dyadic radius = parse_dyadic(rest.substr(colon + 1), bits).value;
  if (radius.is_zero()) throw ParseError("radius must be positive", 5 + colon + 1);
  return systems::TorusBall{center, radius};
}

systems::CylinderSpec parse_cylinder(std::string_view s) {
  if (s.rfind("cyl:", 0) != 0) throw ParseError("expected 'cyl:<start>:<pattern>'", 0);
  const std::string_view rest = s.substr(4);
  const std::size_t colon = rest.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("expected 'cyl:<start>:<pattern>'", s.size());
  systems::CylinderSpec spec;
  spec.start = parse_i64(rest.substr(0, colon), 4);
  const std::string_view pat = rest.substr(colon + 1);
  if (pat.empty()) throw ParseError("empty cylinder pattern", 4 + colon + 1);
  for (std::size_t i = 0; i < pat.size(); ++i) {
    if (pat[i] != '0' && pat[i] != '1')
      throw ParseError("cylinder pattern must be over {0,1}", 4 + colon + 1 + i);
    spec.pattern.push_back(pat[i] - '0');
  }
  return spec;
}

}  // namespace dynsense::text
