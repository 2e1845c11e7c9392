#include "limid/simplex.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <vector>

#include "limid/error.hpp"

namespace limid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarState : char { AtLower, AtUpper, Basic };

class Simplex {
 public:
  Simplex(const LpProblem& p, const SimplexOptions& opt) : p_(p), opt_(opt) {
    load();
  }

  LpSolution run() {
    if (infeasible_bounds_) {
      LpSolution sol;
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    init_basis();
    if (num_artificials_ > 0) {
      std::vector<double> c1(cols_, 0.0);
      for (int j = first_artificial_; j < cols_; ++j) c1[static_cast<std::size_t>(j)] = -1.0;
      optimize(c1);
      double infeas = 0.0;
      for (int j = first_artificial_; j < cols_; ++j)
        infeas += std::max(0.0, xval_[static_cast<std::size_t>(j)]);
      if (infeas > opt_.feas_tol * rhs_scale_) {
        LpSolution sol;
        sol.status = LpStatus::Infeasible;
        sol.iterations = iters_;
        return sol;
      }
      pivot_out_artificials();
      for (int j = first_artificial_; j < cols_; ++j) {
        lo_[static_cast<std::size_t>(j)] = 0.0;
        hi_[static_cast<std::size_t>(j)] = 0.0;
      }
    }
    std::vector<double> c2(cols_, 0.0);
    for (const auto& [v, c] : p_.objective) c2[static_cast<std::size_t>(v)] += c;
    optimize(c2);

    LpSolution sol = extract(c2);
    if (sol.max_violation > opt_.feas_tol) {
      // One retry after a full recomputation of the working quantities.
      refresh(c2);
      optimize(c2);
      sol = extract(c2);
      if (sol.max_violation > 10 * opt_.feas_tol)
        throw SolverError("simplex: residual " + std::to_string(sol.max_violation) +
                          " after refactorization retry");
    }
    return sol;
  }

 private:
  double& at(int r, int j) { return mat_[static_cast<std::size_t>(r) * width_ + static_cast<std::size_t>(j)]; }
  const double& at(int r, int j) const {
    return mat_[static_cast<std::size_t>(r) * width_ + static_cast<std::size_t>(j)];
  }

  void load() {
    n_ = p_.num_vars;
    lo_.assign(static_cast<std::size_t>(n_), 0.0);
    hi_.assign(static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[static_cast<std::size_t>(j)] = p_.lower[static_cast<std::size_t>(j)];
      hi_[static_cast<std::size_t>(j)] = p_.upper[static_cast<std::size_t>(j)];
      if (!(lo_[static_cast<std::size_t>(j)] <= hi_[static_cast<std::size_t>(j)]) ||
          !std::isfinite(lo_[static_cast<std::size_t>(j)]) ||
          !std::isfinite(hi_[static_cast<std::size_t>(j)]))
        throw SolverError("solve_lp expects finite, ordered bounds");
    }

    // Single-variable rows act directly on the bounds; only wider rows
    // enter the tableau.  This is exact, not a relaxation.
    std::vector<int> tableau_rows;
    row_of_.assign(p_.constraints.size(), -1);
    for (std::size_t r = 0; r < p_.constraints.size(); ++r) {
      const LinearConstraint& c = p_.constraints[r];
      if (c.coeffs.size() == 1 && c.coeffs[0].second != 0.0) {
        const auto [v, w] = c.coeffs[0];
        if (v < 0 || v >= n_) throw SolverError("constraint references unknown variable");
        const double b = c.rhs / w;
        const bool le = (c.rel == Relation::Le) == (w > 0);  // after dividing by w
        double& lo = lo_[static_cast<std::size_t>(v)];
        double& hi = hi_[static_cast<std::size_t>(v)];
        if (c.rel == Relation::Eq) {
          lo = std::max(lo, b);
          hi = std::min(hi, b);
        } else if (le) {
          hi = std::min(hi, b);
        } else {
          lo = std::max(lo, b);
        }
        if (lo > hi) {
          if (lo - hi <= opt_.feas_tol) {
            hi = lo;
          } else {
            infeasible_bounds_ = true;
          }
        }
        continue;
      }
      row_of_[r] = static_cast<int>(tableau_rows.size());
      tableau_rows.push_back(static_cast<int>(r));
    }

    m_ = static_cast<int>(tableau_rows.size());
    int num_ineq = 0;
    for (int r : tableau_rows)
      if (p_.constraints[static_cast<std::size_t>(r)].rel != Relation::Eq) ++num_ineq;
    width_ = static_cast<std::size_t>(n_ + num_ineq + m_);
    mat_.assign(static_cast<std::size_t>(m_) * width_, 0.0);
    rhs_.assign(static_cast<std::size_t>(m_), 0.0);
    cols_ = n_;
    is_eq_.assign(static_cast<std::size_t>(m_), false);
    slack_col_.assign(static_cast<std::size_t>(m_), -1);
    rhs_scale_ = 1.0;

    for (int r = 0; r < m_; ++r) {
      const LinearConstraint& c = p_.constraints[static_cast<std::size_t>(tableau_rows[static_cast<std::size_t>(r)])];
      const double sign = (c.rel == Relation::Ge) ? -1.0 : 1.0;  // Ge rows become Le
      double mag = std::abs(c.rhs);
      for (const auto& [v, w] : c.coeffs) {
        if (v < 0 || v >= n_) throw SolverError("constraint references unknown variable");
        at(r, v) += sign * w;
        mag += std::abs(w) * std::max(std::abs(lo_[static_cast<std::size_t>(v)]),
                                      std::abs(hi_[static_cast<std::size_t>(v)]));
      }
      rhs_[static_cast<std::size_t>(r)] = sign * c.rhs;
      rhs_scale_ = std::max(rhs_scale_, std::abs(c.rhs));
      if (c.rel == Relation::Eq) {
        is_eq_[static_cast<std::size_t>(r)] = true;
      } else {
        const int s = new_col(0.0, mag + 1.0);
        at(r, s) = 1.0;
        slack_col_[static_cast<std::size_t>(r)] = s;
      }
    }
  }

  int new_col(double lo, double hi) {
    const int j = cols_++;
    assert(static_cast<std::size_t>(cols_) <= width_);
    lo_.push_back(lo);
    hi_.push_back(hi);
    return j;
  }

  // Gauss-Jordan step on the raw matrix (used before reduced costs exist).
  void eliminate(int r, int s) {
    const double pv = at(r, s);
    assert(std::abs(pv) > 0);
    if (pv != 1.0) {
      const double inv = 1.0 / pv;
      for (int j = 0; j < cols_; ++j) at(r, j) *= inv;
      at(r, s) = 1.0;
      rhs_[static_cast<std::size_t>(r)] *= inv;
    }
    update_rows(r, s);
  }

  // Subtracts multiples of the (normalized) pivot row from every other
  // row carrying the pivot column.  This is the hot kernel; the OpenMP
  // variant computes exactly the same values as the serial loop.
  void update_rows(int r, int s) {
    touched_.clear();
    for (int i = 0; i < m_; ++i)
      if (i != r && at(i, s) != 0.0) touched_.push_back(i);
    const double* prow = &mat_[static_cast<std::size_t>(r) * width_];
    const double prhs = rhs_[static_cast<std::size_t>(r)];
    const int count = static_cast<int>(touched_.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (opt_.threads > 1) num_threads(opt_.threads)
#endif
    for (int k = 0; k < count; ++k) {
      const int i = touched_[static_cast<std::size_t>(k)];
      double* row = &mat_[static_cast<std::size_t>(i) * width_];
      const double f = row[s];
      for (int j = 0; j < cols_; ++j) row[j] -= f * prow[j];
      row[s] = 0.0;
      rhs_[static_cast<std::size_t>(i)] -= f * prhs;
    }
  }

  void init_basis() {
    state_.assign(static_cast<std::size_t>(cols_) + static_cast<std::size_t>(m_),
                  VarState::AtLower);
    xval_.assign(state_.size(), 0.0);
    for (int j = 0; j < cols_; ++j)
      xval_[static_cast<std::size_t>(j)] = lo_[static_cast<std::size_t>(j)];
    basic_.assign(static_cast<std::size_t>(m_), -1);

    // Honor caller hints on equality rows, deepest first.  Hints are
    // indexed by the caller's constraint order.
    if (!p_.basis_hint.empty()) {
      for (std::size_t orig = p_.basis_hint.size(); orig-- > 0;) {
        if (orig >= row_of_.size()) continue;
        const int r = row_of_[orig];
        if (r < 0) continue;
        const int h = p_.basis_hint[orig];
        if (h < 0 || h >= n_ || !is_eq_[static_cast<std::size_t>(r)]) continue;
        if (state_[static_cast<std::size_t>(h)] == VarState::Basic) continue;
        if (std::abs(at(r, h)) < 1e-7) continue;
        eliminate(r, h);
        basic_[static_cast<std::size_t>(r)] = h;
        state_[static_cast<std::size_t>(h)] = VarState::Basic;
      }
    }

    first_artificial_ = -1;
    num_artificials_ = 0;
    for (int r = 0; r < m_; ++r) {
      // Residual with every nonbasic column at its current value.  Basic
      // columns are identity here, so rows are independent.
      double rho = rhs_[static_cast<std::size_t>(r)];
      for (int j = 0; j < cols_; ++j) {
        if (state_[static_cast<std::size_t>(j)] == VarState::Basic) continue;
        const double xv = xval_[static_cast<std::size_t>(j)];
        if (xv != 0.0) rho -= at(r, j) * xv;
      }
      const int b = basic_[static_cast<std::size_t>(r)];
      if (b >= 0) {
        // Hinted basic: keep it when its implied value is in range.
        if (rho >= lo_[static_cast<std::size_t>(b)] - opt_.feas_tol &&
            rho <= hi_[static_cast<std::size_t>(b)] + opt_.feas_tol) {
          xval_[static_cast<std::size_t>(b)] =
              std::clamp(rho, lo_[static_cast<std::size_t>(b)], hi_[static_cast<std::size_t>(b)]);
          continue;
        }
        const double bound = (rho < lo_[static_cast<std::size_t>(b)])
                                 ? lo_[static_cast<std::size_t>(b)]
                                 : hi_[static_cast<std::size_t>(b)];
        state_[static_cast<std::size_t>(b)] =
            (bound == lo_[static_cast<std::size_t>(b)]) ? VarState::AtLower : VarState::AtUpper;
        xval_[static_cast<std::size_t>(b)] = bound;
        basic_[static_cast<std::size_t>(r)] = -1;
        rho -= bound;
      } else if (slack_col_[static_cast<std::size_t>(r)] >= 0) {
        const int s = slack_col_[static_cast<std::size_t>(r)];
        if (rho >= -opt_.feas_tol && rho <= hi_[static_cast<std::size_t>(s)] + opt_.feas_tol) {
          basic_[static_cast<std::size_t>(r)] = s;
          state_[static_cast<std::size_t>(s)] = VarState::Basic;
          xval_[static_cast<std::size_t>(s)] =
              std::clamp(rho, 0.0, hi_[static_cast<std::size_t>(s)]);
          continue;
        }
      }
      // Fresh artificial carrying the leftover residual.  Rows are stored
      // as equations once slacks are in, so a row with a negative residual
      // can be negated wholesale and the artificial keeps coefficient +1
      // (every basic column must stay an identity column).
      if (rho < 0.0) {
        double* row = &mat_[static_cast<std::size_t>(r) * width_];
        for (int j = 0; j < cols_; ++j) row[j] = -row[j];
        rhs_[static_cast<std::size_t>(r)] = -rhs_[static_cast<std::size_t>(r)];
        rho = -rho;
      }
      const int a = new_col(0.0, rho + 1.0);
      if (first_artificial_ < 0) first_artificial_ = a;
      ++num_artificials_;
      at(r, a) = 1.0;
      basic_[static_cast<std::size_t>(r)] = a;
      state_[static_cast<std::size_t>(a)] = VarState::Basic;
      xval_[static_cast<std::size_t>(a)] = rho;
    }
    if (first_artificial_ < 0) first_artificial_ = cols_;
  }

  void compute_dcost(const std::vector<double>& c) {
    dcost_.assign(static_cast<std::size_t>(cols_), 0.0);
    for (int j = 0; j < cols_; ++j)
      dcost_[static_cast<std::size_t>(j)] = (static_cast<std::size_t>(j) < c.size())
                                                ? c[static_cast<std::size_t>(j)]
                                                : 0.0;
    for (int r = 0; r < m_; ++r) {
      const int b = basic_[static_cast<std::size_t>(r)];
      const double cb = (static_cast<std::size_t>(b) < c.size()) ? c[static_cast<std::size_t>(b)] : 0.0;
      if (cb == 0.0) continue;
      const double* row = &mat_[static_cast<std::size_t>(r) * width_];
      for (int j = 0; j < cols_; ++j) dcost_[static_cast<std::size_t>(j)] -= cb * row[j];
    }
    for (int r = 0; r < m_; ++r) dcost_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(r)])] = 0.0;
  }

  void refresh(const std::vector<double>& c) {
    for (int r = 0; r < m_; ++r) {
      double v = rhs_[static_cast<std::size_t>(r)];
      for (int j = 0; j < cols_; ++j) {
        if (state_[static_cast<std::size_t>(j)] == VarState::Basic) continue;
        const double xv = xval_[static_cast<std::size_t>(j)];
        if (xv != 0.0) v -= at(r, j) * xv;
      }
      xval_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(r)])] = v;
    }
    compute_dcost(c);
  }

  void optimize(const std::vector<double>& c) {
    compute_dcost(c);
    gamma_.assign(static_cast<std::size_t>(cols_), 1.0);  // devex reference weights
    const long max_iters =
        (opt_.max_iterations > 0) ? opt_.max_iterations : 20000L + 60L * (m_ + cols_);
    bool bland = false;
    int stall = 0;
    long local_iters = 0;

    while (true) {
      if (local_iters++ > max_iters)
        throw SolverError("simplex iteration limit reached");
      if ((local_iters & 1023) == 0) refresh(c);

      // Entering variable: devex pricing, Bland's rule while stalled.
      int s = -1, sigma = 0;
      double best = 0.0;
      for (int j = 0; j < cols_; ++j) {
        if (state_[static_cast<std::size_t>(j)] == VarState::Basic) continue;
        if (hi_[static_cast<std::size_t>(j)] - lo_[static_cast<std::size_t>(j)] <= 0.0) continue;
        const double d = dcost_[static_cast<std::size_t>(j)];
        int dir = 0;
        if (state_[static_cast<std::size_t>(j)] == VarState::AtLower && d > opt_.pivot_tol)
          dir = 1;
        else if (state_[static_cast<std::size_t>(j)] == VarState::AtUpper && d < -opt_.pivot_tol)
          dir = -1;
        else
          continue;
        if (bland) {
          s = j;
          sigma = dir;
          break;
        }
        const double score = d * d / gamma_[static_cast<std::size_t>(j)];
        if (score > best) {
          best = score;
          s = j;
          sigma = dir;
        }
      }
      if (s < 0) break;  // phase optimal

      // Ratio test with bound flip.
      double limit = hi_[static_cast<std::size_t>(s)] - lo_[static_cast<std::size_t>(s)];
      int lrow = -1;
      double lpivot = 0.0;
      for (int r = 0; r < m_; ++r) {
        const double alpha = at(r, s);
        if (std::abs(alpha) <= opt_.pivot_tol) continue;
        const double delta = -static_cast<double>(sigma) * alpha;
        const int b = basic_[static_cast<std::size_t>(r)];
        double room = (delta > 0.0) ? hi_[static_cast<std::size_t>(b)] - xval_[static_cast<std::size_t>(b)]
                                    : xval_[static_cast<std::size_t>(b)] - lo_[static_cast<std::size_t>(b)];
        if (room < 0.0) room = 0.0;
        const double ratio = room / std::abs(delta);
        if (ratio < limit - 1e-12) {
          limit = ratio;
          lrow = r;
          lpivot = alpha;
        } else if (lrow >= 0 && ratio <= limit + 1e-12) {
          if (!bland && std::abs(alpha) > std::abs(lpivot)) {
            lrow = r;
            lpivot = alpha;
          } else if (bland && basic_[static_cast<std::size_t>(r)] < basic_[static_cast<std::size_t>(lrow)]) {
            lrow = r;
            lpivot = alpha;
          }
        }
      }
      if (!std::isfinite(limit)) throw SolverError("simplex: unbounded direction");
      const double step = std::max(limit, 0.0);

      if (step <= 1e-13) {
        if (++stall > 500) bland = true;
      } else {
        stall = 0;
      }

      if (step > 0.0) {
        for (int r = 0; r < m_; ++r) {
          const double alpha = at(r, s);
          if (alpha != 0.0)
            xval_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(r)])] -=
                static_cast<double>(sigma) * step * alpha;
        }
      }

      if (lrow < 0) {
        // Bound flip.
        xval_[static_cast<std::size_t>(s)] =
            (sigma > 0) ? hi_[static_cast<std::size_t>(s)] : lo_[static_cast<std::size_t>(s)];
        state_[static_cast<std::size_t>(s)] = (sigma > 0) ? VarState::AtUpper : VarState::AtLower;
        ++iters_;
        continue;
      }

      const int leaving = basic_[static_cast<std::size_t>(lrow)];
      const double delta_l = -static_cast<double>(sigma) * lpivot;
      xval_[static_cast<std::size_t>(s)] += static_cast<double>(sigma) * step;
      xval_[static_cast<std::size_t>(leaving)] = (delta_l > 0.0)
                                                     ? hi_[static_cast<std::size_t>(leaving)]
                                                     : lo_[static_cast<std::size_t>(leaving)];
      state_[static_cast<std::size_t>(leaving)] =
          (delta_l > 0.0) ? VarState::AtUpper : VarState::AtLower;
      basic_[static_cast<std::size_t>(lrow)] = s;
      state_[static_cast<std::size_t>(s)] = VarState::Basic;

      // Pivot: normalize, eliminate, update reduced costs and weights.
      eliminate(lrow, s);
      const double f = dcost_[static_cast<std::size_t>(s)];
      const double* prow = &mat_[static_cast<std::size_t>(lrow) * width_];
      if (f != 0.0) {
        for (int j = 0; j < cols_; ++j) dcost_[static_cast<std::size_t>(j)] -= f * prow[j];
      }
      dcost_[static_cast<std::size_t>(s)] = 0.0;
      const double gq = gamma_[static_cast<std::size_t>(s)];
      for (int j = 0; j < cols_; ++j) {
        const double a = prow[j];
        if (a != 0.0) {
          const double cand = a * a * gq;
          if (cand > gamma_[static_cast<std::size_t>(j)])
            gamma_[static_cast<std::size_t>(j)] = cand;
        }
      }
      gamma_[static_cast<std::size_t>(leaving)] = std::max(1.0, gq);
      ++iters_;
    }
  }

  void pivot_out_artificials() {
    for (int r = 0; r < m_; ++r) {
      const int b = basic_[static_cast<std::size_t>(r)];
      if (b < first_artificial_) continue;
      if (std::abs(xval_[static_cast<std::size_t>(b)]) > opt_.feas_tol) continue;
      int s = -1;
      double best = 1e-7;
      for (int j = 0; j < first_artificial_; ++j) {
        if (state_[static_cast<std::size_t>(j)] == VarState::Basic) continue;
        if (std::abs(at(r, j)) > best) {
          best = std::abs(at(r, j));
          s = j;
        }
      }
      if (s < 0) continue;  // redundant row; the artificial stays pinned at zero
      // Degenerate swap: the entering variable keeps its bound value.
      basic_[static_cast<std::size_t>(r)] = s;
      state_[static_cast<std::size_t>(s)] = VarState::Basic;
      state_[static_cast<std::size_t>(b)] = VarState::AtLower;
      xval_[static_cast<std::size_t>(b)] = 0.0;
      eliminate(r, s);
    }
  }

  LpSolution extract(const std::vector<double>& c) {
    (void)c;
    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.values.assign(static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j) sol.values[static_cast<std::size_t>(j)] = xval_[static_cast<std::size_t>(j)];
    double obj = 0.0;
    for (const auto& [v, w] : p_.objective) obj += w * sol.values[static_cast<std::size_t>(v)];
    sol.objective = obj;
    sol.iterations = iters_;

    double viol = 0.0;
    for (const LinearConstraint& lc : p_.constraints) {
      double ax = 0.0;
      for (const auto& [v, w] : lc.coeffs) ax += w * sol.values[static_cast<std::size_t>(v)];
      switch (lc.rel) {
        case Relation::Eq: viol = std::max(viol, std::abs(ax - lc.rhs)); break;
        case Relation::Le: viol = std::max(viol, ax - lc.rhs); break;
        case Relation::Ge: viol = std::max(viol, lc.rhs - ax); break;
      }
    }
    for (int j = 0; j < n_; ++j) {
      viol = std::max(viol, lo_[static_cast<std::size_t>(j)] - sol.values[static_cast<std::size_t>(j)]);
      viol = std::max(viol, sol.values[static_cast<std::size_t>(j)] - hi_[static_cast<std::size_t>(j)]);
    }
    sol.max_violation = viol;
    return sol;
  }

  const LpProblem& p_;
  SimplexOptions opt_;
  int n_ = 0, m_ = 0, cols_ = 0;
  std::size_t width_ = 0;
  std::vector<double> mat_, rhs_, lo_, hi_, xval_, dcost_, gamma_;
  std::vector<VarState> state_;
  std::vector<int> basic_, slack_col_, touched_, row_of_;
  std::vector<bool> is_eq_;
  bool infeasible_bounds_ = false;
  int first_artificial_ = -1, num_artificials_ = 0;
  long iters_ = 0;
  double rhs_scale_ = 1.0;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& options) {
  if (problem.lower.size() != static_cast<std::size_t>(problem.num_vars) ||
      problem.upper.size() != static_cast<std::size_t>(problem.num_vars))
    throw SolverError("solve_lp: bounds arrays must match num_vars");
  Simplex s(problem, options);
  return s.run();
}

}  // namespace limid
