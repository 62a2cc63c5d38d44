#include "chiralkit/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace chiralkit {

namespace {

Rational parse_plain(const std::string& s) {
  // Integer or decimal literal.
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    mpz_class z;
    if (z.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: '" + s + "'");
    return Rational(z);
  }
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  std::size_t frac_len = s.size() - dot - 1;
  if (digits.empty() || frac_len == 0) throw std::invalid_argument("bad rational literal: '" + s + "'");
  mpz_class num;
  if (num.set_str(digits, 10) != 0) throw std::invalid_argument("bad rational literal: '" + s + "'");
  mpz_class den = 1;
  for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  s.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash == std::string::npos) return parse_plain(s);
  Rational num = parse_plain(s.substr(0, slash));
  Rational den = parse_plain(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  Rational q = num / den;
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::int64_t to_int64(const Rational& q) {
  if (!is_integer(q)) throw std::runtime_error("rational " + rational_to_string(q) + " is not an integer");
  const mpz_class& n = q.get_num();
  if (!n.fits_slong_p()) throw std::runtime_error("integer out of int64 range");
  return n.get_si();
}

}  // namespace chiralkit
