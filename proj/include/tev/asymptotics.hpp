#pragma once

// Large-index predictions for the zeros of d(k) and their comparison with
// computed zeros.

#include <complex>
#include <functional>
#include <vector>

#include "tev/profile.hpp"
#include "tev/zeros.hpp"

namespace tev {

enum class Regime { a_gt_1, a_lt_1, a_eq_1 };
enum class Branch { plus, minus };

const char* to_string(Regime r);
const char* to_string(Branch b);

struct AsymptoticCase {
  Regime regime = Regime::a_gt_1;
  int m = 0;
  double eta_deriv = 0.0;  // eta^(m+2)(1)
  double q_mean = 0.0;     // int_0^a q, used only when a = 1
  double a = 0.0;

  // Validated construction; CaseMismatch if regime disagrees with a.
  static AsymptoticCase make(Regime regime, int m, double eta_deriv, double q_mean, double a);
  // Everything taken from the profile: m is the detected smoothness index.
  static AsymptoticCase from(const LiouvilleData& liouville);
};

Regime regime_of(double a);

// log z continued from the principal log w: Log w + Log(z/w). Equal to the
// principal log unless z and w straddle the negative real axis.
cplx branch_log(cplx z, cplx w);

// Solves z - lambda log z = w by fixed-point iteration, log as in branch_log.
cplx solve_transcendental(double lambda, cplx w, double tol = 1e-12);

// Leading-order prediction for the n-th zero of a branch. With refine set,
// the log term is resolved through solve_transcendental instead.
cplx predict_nonreal(const AsymptoticCase& c, int n, Branch branch, bool refine = false);

// sqrt(n^2 pi^2/(a-1)^2 + int_0^a q / (a-1)).
double predict_real(const LiouvilleData& liouville, int n);

struct MatchedPair {
  int n = 0;
  Branch branch = Branch::plus;
  cplx predicted;
  cplx computed;
  double residual = 0.0;
  bool suspect = false;  // residual above half the index spacing
};

struct BranchMatch {
  Branch branch = Branch::plus;
  int shift = 0;  // computed ordinal minus prediction ordinal
  std::vector<MatchedPair> pairs;
  std::vector<cplx> unmatched_computed;
  std::vector<int> unmatched_indices;
  // Nonzero shift, three consecutive suspects, or half the pairs suspect.
  bool systematic_offset = false;
};

struct MatchReport {
  int n_first = 0;
  int n_last = 0;
  double spacing = 0.0;
  BranchMatch plus;
  BranchMatch minus;

  std::vector<MatchedPair> all_pairs() const;
  bool all_matched() const;
  bool systematic_offset() const { return plus.systematic_offset || minus.systematic_offset; }
  // Largest residual over n in [lo, hi], both branches.
  double max_residual(int lo, int hi) const;
  // Partial sums of |residual|^2 in increasing n (both branches).
  std::vector<double> partial_sums() const;
  // Least-squares p in |residual| ~ C n^-p.
  double decay_exponent() const;
};

using Predictor = std::function<cplx(int, Branch)>;

// Pairs predictions for n in [n_first, n_last] with computed non-real zeros.
// The minus branch (lower half plane) is compared with conjugates of the
// reported first-quadrant zeros.
MatchReport match(const SearchReport& zeros, const AsymptoticCase& c, int n_first, int n_last);
MatchReport match(const std::vector<SpectralZero>& zeros, const Predictor& predict, double spacing,
                  int n_first, int n_last);

struct CountingRow {
  double r = 0.0;
  int count = 0;  // non-real zeros with |k| <= r, all symmetric copies
  double ratio = 0.0;  // count * pi / (4 r)
};

std::vector<CountingRow> counting_check(const std::vector<SpectralZero>& first_quadrant,
                                        const std::vector<double>& radii);

}  // namespace tev
