#include "nb_exact.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <stdexcept>

namespace lsanb::oracle {

namespace {

using Big = boost::multiprecision::cpp_rational;

// Small exact fraction; every value in the enumerated instances fits.
struct Frac {
  __int128 num = 0;
  __int128 den = 1;

  static __int128 gcd(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  Frac(__int128 n = 0, __int128 d = 1) : num(n), den(d) {
    const __int128 g = gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  friend Frac operator*(const Frac& a, const Frac& b) { return {a.num * b.num, a.den * b.den}; }
  friend bool operator<(const Frac& a, const Frac& b) { return a.num * b.den < b.num * a.den; }
};

// The double 1 - 1e-12, exactly.
Big clamp_high() {
  int exp = 0;
  const double mant = std::frexp(1.0 - kProbClamp, &exp);
  Big r(static_cast<long long>(std::ldexp(mant, 53)));
  r /= boost::multiprecision::pow(boost::multiprecision::cpp_int(2), 53 - exp);
  return r;
}

template <class T>
struct Table {
  std::vector<T> prior;
  std::vector<std::vector<T>> present, absent;  // P and 1 - P per class, term

  int decide(EventModel event, const std::vector<int>& doc) const {
    std::size_t best = 0;
    T best_score;
    for (std::size_t j = 0; j < prior.size(); ++j) {
      T s = prior[j];
      for (std::size_t k = 0; k < present[j].size(); ++k) {
        if (event == EventModel::kMultinomial) {
          for (int r = 0; r < doc[k]; ++r) s = s * present[j][k];
        } else {
          s = s * (doc[k] > 0 ? present[j][k] : absent[j][k]);
        }
      }
      if (j == 0 || best_score < s) {
        best = j;
        best_score = s;
      }
    }
    return static_cast<int>(best);
  }
};

}  // namespace

struct ExactNb::Impl {
  EventModel event;
  bool big = false;
  Table<Frac> small_table;
  Table<Big> big_table;
};

ExactNb::ExactNb(const NbInstance& inst, EventModel event, WordProbEstimator estimator,
                 PriorForm prior)
    : impl_(std::make_unique<Impl>()) {
  if (event == EventModel::kGaussian) throw std::invalid_argument("ExactNb: count models only");
  impl_->event = event;
  const auto l = static_cast<std::size_t>(inst.num_classes);
  const auto v = static_cast<std::size_t>(inst.num_terms);

  // n_j, n_{c_j,k}, N_j, N_{c_j,k}, n_all, N_all
  std::vector<long> n_j(l, 0), big_n_j(l, 0);
  std::vector<std::vector<long>> n_jk(l, std::vector<long>(v, 0)), big_n_jk = n_jk;
  long n_all = 0, big_n_all = 0;
  for (std::size_t d = 0; d < inst.docs.size(); ++d) {
    const auto j = static_cast<std::size_t>(inst.labels[d]);
    ++n_j[j];
    ++n_all;
    for (std::size_t k = 0; k < v; ++k) {
      const long n = inst.docs[d][k];
      if (n > 0) ++n_jk[j][k];
      big_n_jk[j][k] += n;
      big_n_j[j] += n;
      big_n_all += n;
    }
  }

  std::vector<std::vector<std::pair<long, long>>> p(l, std::vector<std::pair<long, long>>(v));
  for (std::size_t j = 0; j < l; ++j) {
    for (std::size_t k = 0; k < v; ++k) {
      p[j][k] = estimator == WordProbEstimator::kDocCount
                    ? std::pair{1 + n_jk[j][k], n_all + n_j[j]}
                    : std::pair{1 + big_n_jk[j][k], big_n_all + big_n_j[j]};
      if (p[j][k].first >= p[j][k].second) impl_->big = true;
    }
  }
  const long prior_den = (prior == PriorForm::kLaplace ? static_cast<long>(l) : 1L) + n_all;

  if (!impl_->big) {
    auto& t = impl_->small_table;
    for (std::size_t j = 0; j < l; ++j) {
      t.prior.emplace_back(1 + n_j[j], prior_den);
      t.present.emplace_back();
      t.absent.emplace_back();
      for (std::size_t k = 0; k < v; ++k) {
        const auto [num, den] = p[j][k];
        t.present.back().emplace_back(num, den);
        t.absent.back().emplace_back(den - num, den);
      }
    }
  } else {
    static const Big high = clamp_high();
    auto& t = impl_->big_table;
    for (std::size_t j = 0; j < l; ++j) {
      t.prior.push_back(Big(1 + n_j[j]) / Big(prior_den));
      t.present.emplace_back();
      t.absent.emplace_back();
      for (std::size_t k = 0; k < v; ++k) {
        const auto [num, den] = p[j][k];
        const Big pk = num >= den ? high : Big(num) / Big(den);
        t.present.back().push_back(pk);
        t.absent.back().push_back(Big(1) - pk);
      }
    }
  }
}

ExactNb::~ExactNb() = default;

int ExactNb::classify(const std::vector<int>& doc) const {
  return impl_->big ? impl_->big_table.decide(impl_->event, doc)
                    : impl_->small_table.decide(impl_->event, doc);
}

}  // namespace lsanb::oracle
