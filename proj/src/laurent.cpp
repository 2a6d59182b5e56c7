#include "parajones/laurent.hpp"

#include <mutex>
#include <sstream>
#include <vector>

#include "parajones/error.hpp"

namespace parajones {

const char* errc_name(errc c) {
  switch (c) {
    case errc::parse_error: return "ParseError";
    case errc::inconsistent_arc: return "InconsistentArc";
    case errc::unorientable_diagram: return "UnorientableDiagram";
    case errc::inconsistent_crossing: return "InconsistentCrossing";
    case errc::non_divisible: return "NonDivisible";
    case errc::domain_mismatch: return "DomainMismatch";
    case errc::missing_closure: return "MissingClosure";
    case errc::label_collision: return "LabelCollision";
    case errc::dangling_transposition: return "DanglingTransposition";
    case errc::too_small: return "TooSmall";
    case errc::too_many_pieces: return "TooManyPieces";
    case errc::open_diagram: return "OpenDiagram";
    case errc::all_rejected: return "AllRejected";
    case errc::invalid_config: return "InvalidConfig";
    case errc::internal: return "Internal";
  }
  return "Unknown";
}

LaurentPoly LaurentPoly::monomial(long exponent, mpz_class coefficient) {
  LaurentPoly p;
  if (coefficient != 0) p.terms_[exponent] = std::move(coefficient);
  return p;
}

LaurentPoly LaurentPoly::loop_value() {
  LaurentPoly d;
  d.terms_[2] = -1;
  d.terms_[-2] = -1;
  return d;
}

long LaurentPoly::min_exponent() const { return terms_.begin()->first; }
long LaurentPoly::max_exponent() const { return terms_.rbegin()->first; }

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& rhs) {
  for (const auto& [e, c] : rhs.terms_) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& rhs) const {
  LaurentPoly out = *this;
  out += rhs;
  return out;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& rhs) const { return *this + (-rhs); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& rhs) const {
  LaurentPoly out;
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : rhs.terms_) {
      mpz_class prod = c1 * c2;
      auto it = out.terms_.find(e1 + e2);
      if (it == out.terms_.end()) {
        out.terms_.emplace(e1 + e2, std::move(prod));
      } else {
        it->second += prod;
      }
    }
  }
  for (auto it = out.terms_.begin(); it != out.terms_.end();) {
    if (it->second == 0) {
      it = out.terms_.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

LaurentPoly LaurentPoly::shifted(long shift) const {
  LaurentPoly out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(e + shift, c);
  return out;
}

LaurentPoly LaurentPoly::mirrored() const {
  LaurentPoly out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(-e, c);
  return out;
}

mpq_class LaurentPoly::eval(const mpq_class& a) const {
  if (a == 0) throw Error(errc::invalid_config, "cannot evaluate at A = 0");
  mpq_class sum = 0;
  for (const auto& [e, c] : terms_) {
    mpq_class power;
    if (e >= 0) {
      mpz_class num;
      mpz_class den;
      mpz_pow_ui(num.get_mpz_t(), a.get_num().get_mpz_t(), static_cast<unsigned long>(e));
      mpz_pow_ui(den.get_mpz_t(), a.get_den().get_mpz_t(), static_cast<unsigned long>(e));
      power = mpq_class(num, den);
    } else {
      mpz_class num;
      mpz_class den;
      mpz_pow_ui(num.get_mpz_t(), a.get_den().get_mpz_t(), static_cast<unsigned long>(-e));
      mpz_pow_ui(den.get_mpz_t(), a.get_num().get_mpz_t(), static_cast<unsigned long>(-e));
      power = mpq_class(num, den);
    }
    power.canonicalize();
    sum += mpq_class(c) * power;
  }
  sum.canonicalize();
  return sum;
}

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest exponent first reads like hand-written polynomials.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    mpz_class abs = c < 0 ? mpz_class(-c) : c;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (abs != 1 || e == 0) os << abs.get_str();
    if (e != 0) {
      if (abs != 1) os << "*";
      os << "A^" << e;
    }
  }
  return os.str();
}

LaurentPoly pow_d(long k) {
  if (k < 0) throw Error(errc::invalid_config, "pow_d requires k >= 0");
  static std::mutex mu;
  static std::vector<LaurentPoly> cache{LaurentPoly::one()};
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<long>(cache.size()) <= k) {
    cache.push_back(cache.back() * LaurentPoly::loop_value());
  }
  return cache[static_cast<size_t>(k)];
}

LaurentPoly div_exact_d(const LaurentPoly& p) {
  if (p.is_zero()) return p;
  // d = -A^-2 * (A^4 + 1), so p/d = (p * -A^2) / (A^4 + 1). Dividing by the
  // ordinary polynomial A^4 + 1 from the top terminates and leaves a
  // remainder exactly when p is not a multiple of d.
  LaurentPoly num = -p.shifted(2);
  std::map<long, mpz_class> rem(num.terms().begin(), num.terms().end());
  LaurentPoly quot;
  const long low = num.min_exponent();
  while (!rem.empty()) {
    auto top = rem.rbegin();
    long e = top->first;
    if (e - 4 < low) throw Error(errc::non_divisible, "polynomial is not a multiple of d");
    mpz_class c = top->second;
    quot += LaurentPoly::monomial(e - 4, c);
    // subtract c*A^(e-4) * (A^4 + 1)
    rem.erase(std::prev(rem.end()));
    auto it = rem.find(e - 4);
    if (it == rem.end()) {
      rem.emplace(e - 4, -c);
    } else {
      it->second -= c;
      if (it->second == 0) rem.erase(it);
    }
  }
  return quot;
}

LaurentPoly neg_a3_pow(long w) {
  mpz_class sign = (w % 2 == 0) ? 1 : -1;
  return LaurentPoly::monomial(3 * w, sign);
}

std::map<long, mpz_class> substitute_t(const LaurentPoly& p) {
  std::map<long, mpz_class> out;
  for (const auto& [e, c] : p.terms()) out.emplace(-e, c);
  return out;
}

}  // namespace parajones
