#include "qtopos/gaussian.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

#include "qtopos/error.hpp"

namespace qtopos {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Reads an unsigned "a" or "a/b" at text[pos]; returns false if none present.
bool read_rational(std::string_view text, std::size_t& pos, mpq_class& out) {
  std::size_t start = pos;
  while (pos < text.size() && is_digit(text[pos])) ++pos;
  if (pos == start) return false;
  std::string num(text.substr(start, pos - start));
  std::string den = "1";
  if (pos < text.size() && text[pos] == '/') {
    std::size_t dstart = ++pos;
    while (pos < text.size() && is_digit(text[pos])) ++pos;
    if (pos == dstart) throw ParseError("missing denominator in '" + std::string(text) + "'");
    den = std::string(text.substr(dstart, pos - dstart));
  }
  mpz_class d(den);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  out = mpq_class(mpz_class(num), d);
  out.canonicalize();
  return true;
}

std::string rational_string(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace

GaussianRational GaussianRational::parse(std::string_view raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  if (text.empty()) throw ParseError("empty scalar literal");

  mpq_class re(0), im(0);
  std::size_t pos = 0;
  int terms = 0;
  bool seen_re = false, seen_im = false;
  while (pos < text.size()) {
    int sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (terms > 0) {
      throw ParseError("expected '+' or '-' in '" + std::string(raw) + "'");
    }
    mpq_class value(1);
    bool has_number = read_rational(text, pos, value);
    bool imaginary = pos < text.size() && text[pos] == 'i';
    if (imaginary) ++pos;
    if (!has_number && !imaginary)
      throw ParseError("unsupported scalar literal '" + std::string(raw) +
                       "' (only exact rationals a/b and a/b+c/d i are accepted)");
    if (imaginary) {
      if (seen_im) throw ParseError("duplicate imaginary part in '" + std::string(raw) + "'");
      im = sign * value;
      seen_im = true;
    } else {
      if (seen_re) throw ParseError("duplicate real part in '" + std::string(raw) + "'");
      re = sign * value;
      seen_re = true;
    }
    ++terms;
    if (terms > 2) throw ParseError("too many terms in '" + std::string(raw) + "'");
  }
  return {re, im};
}

GaussianRational GaussianRational::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  mpq_class n = norm2();
  return {re_ / n, -im_ / n};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class m = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(m);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  return *this *= o.inverse();
}

std::string GaussianRational::to_string() const {
  if (sgn(im_) == 0) return rational_string(re_);
  std::string imag = rational_string(abs(im_)) + " i";
  if (sgn(re_) == 0) return (sgn(im_) < 0 ? "-" : "") + imag;
  return rational_string(re_) + (sgn(im_) < 0 ? "-" : "+") + imag;
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.to_string(); }

}  // namespace qtopos
