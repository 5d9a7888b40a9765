// SPDX-License-Identifier: Apache-2.0
#include "polyflow/tower.hpp"

#include <cctype>
#include <numeric>

namespace polyflow {
namespace detail {

struct TowerData {
  std::vector<Generator> gens;
  std::size_t degree = 1;
  std::vector<std::vector<int>> exps;       // [m][g]
  std::vector<std::size_t> radix;           // place value of generator g
  std::vector<std::size_t> prod_index;      // [i * degree + j]
  std::vector<Integer> prod_factor;         // [i * degree + j]
  std::vector<double> values;               // [m]
  static constexpr unsigned kCachedBits = 96;
  std::vector<RationalInterval> cached;     // [m] at kCachedBits
};

}  // namespace detail

namespace {

bool valid_name(const std::string& name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

RationalInterval generator_enclosure(const Generator& g, unsigned bits) {
  Integer scaled = g.radicand;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(bits) * g.exponent);
  Integer k;
  mpz_root(k.get_mpz_t(), scaled.get_mpz_t(), static_cast<unsigned long>(g.exponent));
  Integer den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
  return {make_rational(k, den), make_rational(k + 1, den)};
}

RationalInterval enclose_monomial(const std::vector<Generator>& gens, const std::vector<int>& exps,
                                  unsigned bits) {
  RationalInterval out{Rational(1), Rational(1)};
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (exps[g] == 0) continue;
    auto iv = generator_enclosure(gens[g], bits);
    out.lo *= pow_of(iv.lo, static_cast<unsigned long>(exps[g]));
    out.hi *= pow_of(iv.hi, static_cast<unsigned long>(exps[g]));
  }
  return out;
}

std::shared_ptr<const detail::TowerData> build(std::vector<Generator> gens) {
  constexpr std::size_t kMaxDegree = 256;
  auto data = std::make_shared<detail::TowerData>();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto& g = gens[i];
    if (!valid_name(g.name)) throw TowerError("invalid generator name '" + g.name + "'");
    if (g.exponent != 2 && g.exponent != 3)
      throw TowerError("generator '" + g.name + "' must have exponent 2 or 3");
    if (g.radicand <= 0) throw TowerError("generator '" + g.name + "' needs a positive radicand");
    for (std::size_t j = 0; j < i; ++j)
      if (gens[j].name == g.name) throw TowerError("duplicate generator name '" + g.name + "'");
    data->degree *= static_cast<std::size_t>(g.exponent);
    if (data->degree > kMaxDegree) throw TowerError("tower degree exceeds 256");
  }
  const std::size_t d = data->degree;
  const std::size_t k = gens.size();
  data->radix.assign(k, 1);
  for (std::size_t g = k; g-- > 0;)
    data->radix[g] = (g + 1 < k) ? data->radix[g + 1] * static_cast<std::size_t>(gens[g + 1].exponent) : 1;
  data->exps.assign(d, std::vector<int>(k, 0));
  for (std::size_t m = 0; m < d; ++m) {
    std::size_t rest = m;
    for (std::size_t g = 0; g < k; ++g) {
      data->exps[m][g] = static_cast<int>(rest / data->radix[g]);
      rest %= data->radix[g];
    }
  }

  // Mordell: with positive real roots the degree is the full product iff no
  // nontrivial monomial is rational. m^L is an integer N for L = lcm(ei), and
  // m is rational iff N is a perfect L-th power.
  unsigned long lcm = 1;
  for (const auto& g : gens) lcm = std::lcm(lcm, static_cast<unsigned long>(g.exponent));
  for (std::size_t m = 1; m < d; ++m) {
    Integer n = 1;
    for (std::size_t g = 0; g < k; ++g) {
      unsigned long power = static_cast<unsigned long>(data->exps[m][g]) * (lcm / static_cast<unsigned long>(gens[g].exponent));
      n *= pow_of(gens[g].radicand, power);
    }
    if (mpz_root(Integer().get_mpz_t(), n.get_mpz_t(), lcm) != 0) {
      std::string mono;
      for (std::size_t g = 0; g < k; ++g)
        for (int a = 0; a < data->exps[m][g]; ++a) mono += (mono.empty() ? "" : "*") + gens[g].name;
      throw TowerError("tower is not a field of full degree: monomial " + mono + " is rational");
    }
  }

  data->prod_index.resize(d * d);
  data->prod_factor.resize(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      Integer factor = 1;
      std::size_t idx = 0;
      for (std::size_t g = 0; g < k; ++g) {
        int s = data->exps[i][g] + data->exps[j][g];
        if (s >= gens[g].exponent) {
          s -= gens[g].exponent;
          factor *= gens[g].radicand;
        }
        idx += static_cast<std::size_t>(s) * data->radix[g];
      }
      data->prod_index[i * d + j] = idx;
      data->prod_factor[i * d + j] = factor;
    }
  }

  data->values.resize(d);
  data->cached.resize(d);
  for (std::size_t m = 0; m < d; ++m) {
    data->cached[m] = enclose_monomial(gens, data->exps[m], detail::TowerData::kCachedBits);
    Rational mid = (data->cached[m].lo + data->cached[m].hi) / 2;
    data->values[m] = mid.get_d();
  }
  data->gens = std::move(gens);
  return data;
}

}  // namespace

TowerSpec::TowerSpec() : TowerSpec(std::vector<Generator>{}) {}

TowerSpec::TowerSpec(std::vector<Generator> generators) : data_(build(std::move(generators))) {}

std::size_t TowerSpec::degree() const { return data_->degree; }

const std::vector<Generator>& TowerSpec::generators() const { return data_->gens; }

std::optional<std::size_t> TowerSpec::generator_index(const std::string& name) const {
  for (std::size_t g = 0; g < data_->gens.size(); ++g)
    if (data_->gens[g].name == name) return g;
  return std::nullopt;
}

const std::vector<int>& TowerSpec::exponents(std::size_t m) const { return data_->exps[m]; }

std::size_t TowerSpec::basis_index(const std::vector<int>& exps) const {
  std::size_t idx = 0;
  for (std::size_t g = 0; g < exps.size(); ++g) idx += static_cast<std::size_t>(exps[g]) * data_->radix[g];
  return idx;
}

std::size_t TowerSpec::product_index(std::size_t i, std::size_t j) const {
  return data_->prod_index[i * data_->degree + j];
}

const Integer& TowerSpec::product_factor(std::size_t i, std::size_t j) const {
  return data_->prod_factor[i * data_->degree + j];
}

double TowerSpec::monomial_value(std::size_t m) const { return data_->values[m]; }

RationalInterval TowerSpec::monomial_enclosure(std::size_t m, unsigned bits) const {
  if (bits == detail::TowerData::kCachedBits) return data_->cached[m];
  return enclose_monomial(data_->gens, data_->exps[m], bits);
}

std::string TowerSpec::to_string() const {
  std::string out;
  for (const auto& g : data_->gens) {
    if (!out.empty()) out += ", ";
    out += g.name + "^" + std::to_string(g.exponent) + "=" + g.radicand.get_str();
  }
  return out;
}

bool TowerSpec::embeds_in(const TowerSpec& other) const {
  for (const auto& g : data_->gens) {
    auto idx = other.generator_index(g.name);
    if (!idx || !(other.generators()[*idx] == g)) return false;
  }
  return true;
}

bool TowerSpec::operator==(const TowerSpec& other) const {
  return data_ == other.data_ || data_->gens == other.data_->gens;
}

TowerSpec TowerSpec::sqrt2() { return TowerSpec({{"r", 2, 2}}); }
TowerSpec TowerSpec::sqrt5() { return TowerSpec({{"s", 2, 5}}); }
TowerSpec TowerSpec::sqrt2_cbrt3() { return TowerSpec({{"r", 2, 2}, {"c", 3, 3}}); }

}  // namespace polyflow
