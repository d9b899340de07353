#pragma once

// Model families with their own evaluators and Markov bases: Poisson
// regression, two-way tables, binary models without the l-way interaction
// and the 3x3x2 model without the three-way interaction.

#include <vector>

#include "toric/exactmath.hpp"
#include "toric/model.hpp"

namespace toric {

using Move = CountVec;

// ---- Poisson regression -------------------------------------------------

/// 2 x m matrix with rows (1, 2, ..., m) and (1, ..., 1).
IntMatrix poisson_A(Count m);
ToricModel poisson_model(Count m, Count b1, Count b2, RatVec y = {});

/// Z(n, k) for every n <= b1, k <= b2 from the partial Bell polynomial
/// recurrence B_{n,k} = sum_i C(n-1, i-1) x_i B_{n-i,k-1}, x_i = i! y_i,
/// Z(n, k) = B_{n,k} / n!.
class BellTable {
 public:
  BellTable(Count m, Count b1, Count b2, RatVec y = {});
  const Rat& z(Count n, Count k) const;
  /// y_i Z(n - i, k - 1) for i = 1..m (0-based output).
  RatVec weights(Count n, Count k) const;
  Count m() const { return m_; }
  Count b1() const { return b1_; }
  Count b2() const { return b2_; }

 private:
  Count m_, b1_, b2_;
  RatVec y_;
  std::vector<Rat> z_;  // (b1+1) x (b2+1), row-major in n
};

/// (b1-1)! / ((b2-1)! (b1-b2)! b2!), the y = 1 value when m >= b1 - b2 + 1.
Rat lah_closed_form(Count b1, Count b2);

/// Moves e_i + e_j - e_{i+1} - e_{j-1} for i + 2 <= j.
std::vector<Move> poisson_markov_basis(Count m);

// ---- two-way tables -----------------------------------------------------

HierarchicalSpec twoway_spec(Count r1, Count r2);
ToricModel twoway_model(const CountVec& rows, const CountVec& cols, RatVec y = {});
ToricModel twoway_model_from_table(Count r1, Count r2, const CountVec& table, RatVec y = {});

/// Cell weights y for the odds-ratio matrix z (r1 x r2, row-major), whose
/// last row and column must be 1; y = z then gives
/// z_ij = y_ij y_{r1 r2} / (y_{i r2} y_{r1 j}).
RatVec twoway_y_from_odds(Count r1, Count r2, const RatVec& z);

/// n! / (prod row! prod col!)
Rat twoway_z_indep(const CountVec& rows, const CountVec& cols);

/// Basic moves +1 at (i1,j1),(i2,j2) and -1 at (i1,j2),(i2,j1), i1<i2, j1<j2.
std::vector<Move> twoway_markov_basis(Count r1, Count r2);
Int twoway_volume(Count r1, Count r2);

/// Parameters of the type (r1, r1+r2) polynomial attached to two-way
/// margins. Reported as metadata only.
struct TwowayThyp {
  CountVec alpha;  // -u_{i.}, i < r1
  CountVec beta;   // -u_{.j}, j < r2
  Count gamma = 0; // u_{r1.} + u_{.r2} - n + 1
};
TwowayThyp twoway_thyp_params(const CountVec& rows, const CountVec& cols);

// ---- binary models without the l-way interaction -----------------------

/// Binary l-way table with all (l-1)-subsets as facets, lexicographically.
HierarchicalSpec nonlway_spec(int l);
ToricModel nonlway_model(int l, const CountVec& b, RatVec y = {});

/// The fiber is one-dimensional: u_j = alpha_j + epsilon_j t with
/// t = u_base. Cells with epsilon = -1 give the upper parameters
/// c = -alpha, cells with epsilon = +1 give the lower parameters
/// d = alpha + 1 (base cell first, d = 1), and
///   Z = prefactor * y_power * kF(k-1)(c; d; z)
/// with prefactor = 1 / prod alpha_j!, y_power = prod y_j^alpha_j and
/// z = prod_{epsilon=+1} y / prod_{epsilon=-1} y.
struct KFParams {
  int l = 0;
  std::size_t k = 0;
  std::size_t base_cell = 0;
  CountVec alpha;
  std::vector<int> epsilon;
  CountVec c;
  CountVec d;
  std::vector<std::size_t> c_cells;
  std::vector<std::size_t> d_cells;
  Rat z;
  Rat prefactor;
  Rat y_power;
};

/// Exact solution of the fiber parameterization around `base_cell`
/// (any cell). Throws InfeasibleError if b is not in the lattice of A.
KFParams nonlway_parameterize(int l, const CountVec& b, const RatVec& y, std::size_t base_cell);

/// Parameters for the series form: the base is the epsilon = +1 cell (same
/// sign class as cell 1...1) with the smallest alpha, so that all d >= 1.
/// Throws InfeasibleError for an empty fiber.
KFParams nonlway_params(int l, const CountVec& b, const RatVec& y);

/// sum_u u^power prod (c_i)_u / prod (d_i)_u z^u. The d vector includes
/// the leading 1 standing for u!. Requires a nonpositive integer among c.
Rat kf_eval(const RatVec& c, const RatVec& d, const Rat& z, int power);
Rat kf_eval(const CountVec& c, const CountVec& d, const Rat& z, int power);

/// theta^order F = sum_{i < order} coeffs[i] theta^i F for F = kf series
/// with parameters (c, d, z). order = k when z != 1; when z = 1 the
/// relation drops to order k - 1 and needs sum(d - c) != k.
struct ThetaReduction {
  std::size_t order = 0;
  RatVec coeffs;
};
ThetaReduction theta_reduction(const RatVec& c, const RatVec& d, const Rat& z);

/// The single move: +1 on cells with an even number of 2s, -1 elsewhere.
Move nonlway_markov_basis(int l);

// ---- structural family detection ---------------------------------------

bool is_twoway_model(const ToricModel& model);
bool is_poisson_model(const ToricModel& model);
/// l if the model is the binary non-l-way model, otherwise 0.
int nonlway_order(const ToricModel& model);
/// prod_{even number of 2s} y / prod_{odd} y over binary cells.
Rat nonlway_z(const RatVec& y);
/// The family tag if set, otherwise the detected structure.
Family detect_family(const ToricModel& model);

// ---- 3x3x2 without the three-way interaction ---------------------------

HierarchicalSpec spec_332();

/// The four-variable Pochhammer sum over the fiber in the free cells
/// (u111, u121, u211, u221). Proportional to Z when the table with those
/// four cells set to zero lies in the fiber.
Rat series_332_eval(const CountVec& b, const RatVec& y);
/// z_111, z_121, z_211, z_221 from y.
RatVec z_332(const RatVec& y);
/// prod y^alpha where alpha is the table with the free cells at zero.
Rat series_332_monomial(const CountVec& b, const RatVec& y);

}  // namespace toric
