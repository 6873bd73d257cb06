#include "rpgo/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace rpgo {

void ConicProblem::fix_entry_sym(int r, int c, double value) {
  fixed_entries.push_back({flat(r, c), value});
  if (r != c) fixed_entries.push_back({flat(c, r), value});
}

void ConicProblem::fix_block2(int r0, int c0, const Mat2& value) {
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      fixed_entries.push_back({flat(r0 + r, c0 + c), value(r, c)});
      if (r0 != c0) fixed_entries.push_back({flat(c0 + c, r0 + r), value(r, c)});
    }
  }
}

double eval_penalty(PenaltyKind kind, double weight, const Eigen::VectorXd& v) {
  switch (kind) {
    case PenaltyKind::l2_norm:
    case PenaltyKind::frobenius_norm:
      return weight * v.norm();
    case PenaltyKind::l1_norm:
      return weight * v.lpNorm<1>();
    case PenaltyKind::huber_of_l2:
    case PenaltyKind::huber_of_frobenius: {
      const double x = weight * v.norm();
      return x <= 1.0 ? x * x : 2.0 * x - 1.0;
    }
    case PenaltyKind::box_interval:
      return 0.0;  // indicator; feasibility is the solver's job
  }
  return 0.0;
}

double ConicProblem::eval(const Eigen::VectorXd& x) const {
  double total = 0.0;
  for (const auto& t : terms) {
    Eigen::VectorXd v = t.slice.offset;
    for (const auto& e : t.slice.entries) v[e.comp] += e.coeff * x[e.index];
    total += eval_penalty(t.kind, t.weight, v);
  }
  return total;
}

double ConicProblem::eval(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd x(vars());
  if (psd_cone) {
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) x[flat(r, c)] = X(r, c);
  } else {
    x = X.col(0);
  }
  return eval(x);
}

Eigen::VectorXd prox(PenaltyKind kind, double weight, double step, const Eigen::VectorXd& v) {
  const double w = weight;
  const double t = step;
  switch (kind) {
    case PenaltyKind::l2_norm:
    case PenaltyKind::frobenius_norm: {
      const double nv = v.norm();
      if (nv <= t * w) return Eigen::VectorXd::Zero(v.size());
      return (1.0 - t * w / nv) * v;
    }
    case PenaltyKind::l1_norm: {
      const double thr = t * w;
      Eigen::VectorXd out = v;
      for (int i = 0; i < out.size(); ++i) {
        out[i] = out[i] > thr ? out[i] - thr : (out[i] < -thr ? out[i] + thr : 0.0);
      }
      return out;
    }
    case PenaltyKind::huber_of_l2:
    case PenaltyKind::huber_of_frobenius: {
      // Radial prox of x -> h(w x). Quadratic branch shrinks by 1/(1 + 2 t w^2),
      // linear branch translates by 2 t w; the branch point r = 1/w + 2 t w is
      // where both expressions agree.
      const double r = v.norm();
      if (r == 0.0) return v;
      const double s =
          r <= 1.0 / w + 2.0 * t * w ? r / (1.0 + 2.0 * t * w * w) : r - 2.0 * t * w;
      return (s / r) * v;
    }
    case PenaltyKind::box_interval: {
      Eigen::VectorXd out = v;
      for (int i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i], 0.0, w);
      return out;
    }
  }
  return v;
}

namespace {

Eigen::MatrixXd clamp_psd(const Eigen::MatrixXd& sym, Eigen::VectorXd* evals = nullptr) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  if (evals) *evals = lam;
  int first_pos = 0;
  while (first_pos < lam.size() && lam[first_pos] <= 0.0) ++first_pos;
  const int k = static_cast<int>(lam.size()) - first_pos;
  if (k == 0) return Eigen::MatrixXd::Zero(sym.rows(), sym.cols());
  if (first_pos == 0) return sym;
  const auto u = eig.eigenvectors().rightCols(k);
  return u * lam.tail(k).asDiagonal() * u.transpose();
}

}  // namespace

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& s) {
  if (s.rows() != s.cols()) throw std::invalid_argument("project_psd: not square");
  if ((s - s.transpose()).lpNorm<Eigen::Infinity>() > 1e-9) {
    throw std::invalid_argument("project_psd: input not symmetric within 1e-9");
  }
  const Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
  return clamp_psd(sym);
}

Eigen::VectorXd SolveReport::x_flat() const {
  Eigen::VectorXd x(X_hat.size());
  const int d = static_cast<int>(X_hat.rows());
  if (X_hat.cols() == 1) return X_hat.col(0);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) x[r * d + c] = X_hat(r, c);
  return x;
}

SolveReport solve(const ConicProblem& problem, const SolveOptions& opts) {
  const int dim = problem.dim;
  const int n_vars = problem.vars();
  if (dim <= 0) throw std::invalid_argument("solve: empty problem");

  // Variable scaling y = x * g_r * g_c (matrices) or y = x * g_i (vectors).
  Eigen::VectorXd g = problem.col_scale;
  if (g.size() == 0) g = Eigen::VectorXd::Ones(dim);
  if (g.size() != dim) throw std::invalid_argument("solve: col_scale size mismatch");
  Eigen::VectorXd entry_scale(n_vars);
  if (problem.psd_cone) {
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) entry_scale[r * dim + c] = g[r] * g[c];
  } else {
    entry_scale = g;
  }

  // Scaled terms: coefficients mapped to y, then each term row-normalized with
  // the norm folded into its weight (the penalty family is closed under this).
  struct ScaledTerm {
    PenaltyKind kind;
    double weight;
    int offset_begin;  // into stacked offset vector
    int size;
  };
  std::vector<ScaledTerm> sterms;
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> offsets;
  int n_comp = 0;
  for (const auto& term : problem.terms) {
    const int sz = term.slice.size();
    // max component norm of the y-space coefficients
    Eigen::VectorXd comp_norm2 = Eigen::VectorXd::Zero(sz);
    for (const auto& e : term.slice.entries) {
      const double cy = e.coeff / entry_scale[e.index];
      comp_norm2[e.comp] += cy * cy;
    }
    double sigma = std::sqrt(comp_norm2.maxCoeff());
    if (!(sigma > 0.0)) sigma = 1.0;
    for (const auto& e : term.slice.entries) {
      trips.emplace_back(n_comp + e.comp, e.index, e.coeff / entry_scale[e.index] / sigma);
    }
    for (int k = 0; k < sz; ++k) offsets.push_back(term.slice.offset[k] / sigma);
    ScaledTerm st;
    st.kind = term.kind;
    st.weight = term.kind == PenaltyKind::box_interval ? term.weight / sigma
                                                       : term.weight * sigma;
    st.offset_begin = n_comp;
    st.size = sz;
    sterms.push_back(st);
    n_comp += sz;
  }
  const int n_slices = n_comp;
  Eigen::SparseMatrix<double> M(n_slices, n_vars);
  M.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseMatrix<double> Mt = M.transpose();
  Eigen::VectorXd c_off = Eigen::Map<Eigen::VectorXd>(offsets.data(), offsets.size());

  // Fixed entries in y-space.
  std::vector<char> is_fixed(n_vars, 0);
  Eigen::VectorXd e_full = Eigen::VectorXd::Zero(n_vars);
  for (const auto& f : problem.fixed_entries) {
    is_fixed[f.index] = 1;
    e_full[f.index] = f.value * entry_scale[f.index];
  }
  std::vector<int> free_idx;
  free_idx.reserve(n_vars);
  for (int i = 0; i < n_vars; ++i) {
    if (!is_fixed[i]) free_idx.push_back(i);
  }
  const int n_free = static_cast<int>(free_idx.size());
  std::vector<int> free_of_full(n_vars, -1);
  for (int k = 0; k < n_free; ++k) free_of_full[free_idx[k]] = k;

  // H_ff = (I + M^T M) restricted to free indices; factored once.
  Eigen::SparseMatrix<double> MtM = (Mt * M).pruned();
  std::vector<Eigen::Triplet<double>> htrips;
  htrips.reserve(MtM.nonZeros() + n_free);
  for (int k = 0; k < n_free; ++k) htrips.emplace_back(k, k, 1.0);
  for (int col = 0; col < MtM.outerSize(); ++col) {
    const int fc = free_of_full[col];
    if (fc < 0) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(MtM, col); it; ++it) {
      const int fr = free_of_full[it.row()];
      if (fr >= 0) htrips.emplace_back(fr, fc, it.value());
    }
  }
  Eigen::SparseMatrix<double> H(n_free, n_free);
  H.setFromTriplets(htrips.begin(), htrips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(H);
  if (chol.info() != Eigen::Success) {
    throw std::runtime_error("solve: factorization of the projection system failed");
  }
  const Eigen::VectorXd adj_full = Mt * (M * e_full);

  // ADMM state.
  double rho = opts.rho;
  const double alpha = opts.over_relaxation;
  Eigen::VectorXd zx = e_full;  // cone-side copies
  Eigen::VectorXd zv = Eigen::VectorXd::Zero(n_slices);
  Eigen::VectorXd ux = Eigen::VectorXd::Zero(n_vars);
  Eigen::VectorXd uv = Eigen::VectorXd::Zero(n_slices);
  Eigen::VectorXd x(n_vars), v(n_slices);
  Eigen::VectorXd rhs(n_vars), rhs_f(n_free), x_f(n_free);
  Eigen::MatrixXd work(problem.psd_cone ? dim : 0, problem.psd_cone ? dim : 0);

  SolveReport report;
  report.residual_history.reserve(opts.max_iter);
  std::ofstream log;
  if (opts.log_every > 0 && !opts.log_path.empty()) {
    log.open(opts.log_path);
    log << "iter,objective,primal_res,dual_res\n";
  }

  auto prox_all = [&](const Eigen::VectorXd& pv, Eigen::VectorXd& out) {
    for (const auto& st : sterms) {
      out.segment(st.offset_begin, st.size) =
          prox(st.kind, st.weight, 1.0 / rho, pv.segment(st.offset_begin, st.size));
    }
  };

  // The returned matrix is the PSD projection of the affine point with fixed
  // entries overwritten; convergence additionally requires that construction
  // to keep its minimum eigenvalue above -1e-7 (the report invariant).
  auto returned_matrix_ok = [&]() {
    if (!problem.psd_cone || problem.fixed_entries.empty()) return true;
    Eigen::MatrixXd xm(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int cc = 0; cc < dim; ++cc) xm(r, cc) = x[r * dim + cc] / (g[r] * g[cc]);
    xm = 0.5 * (xm + xm.transpose()).eval();
    Eigen::MatrixXd proj = clamp_psd(xm);
    for (const auto& f : problem.fixed_entries) proj(f.index / dim, f.index % dim) = f.value;
    proj = 0.5 * (proj + proj.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(proj, Eigen::EigenvaluesOnly);
    return eig.eigenvalues()[0] >= -1e-7;
  };

  int it = 0;
  bool converged = false;
  int next_fixdev_check = 0;
  int rho_changes = 0;  // balancing freezes once the scales are settled
  double rpri = 0.0, sdua = 0.0;
  for (; it < opts.max_iter; ++it) {
    // Affine side: project (zx - ux, zv - uv) onto {v = M y + c, y_F = e}.
    rhs = (zx - ux) + Mt * ((zv - uv) - c_off);
    for (int k = 0; k < n_free; ++k) rhs_f[k] = rhs[free_idx[k]] - adj_full[free_idx[k]];
    x_f = chol.solve(rhs_f);
    x = e_full;
    for (int k = 0; k < n_free; ++k) x[free_idx[k]] = x_f[k];
    v = M * x + c_off;

    // Over-relaxation toward the previous cone point.
    const Eigen::VectorXd xr = alpha * x + (1.0 - alpha) * zx;
    const Eigen::VectorXd vr = alpha * v + (1.0 - alpha) * zv;

    // Cone side: PSD projection and per-term proxes.
    Eigen::VectorXd zx_new(n_vars);
    if (problem.psd_cone) {
      for (int r = 0; r < dim; ++r)
        for (int cc = 0; cc < dim; ++cc) work(r, cc) = xr[r * dim + cc] + ux[r * dim + cc];
      work = 0.5 * (work + work.transpose()).eval();
      const Eigen::MatrixXd proj = clamp_psd(work);
      for (int r = 0; r < dim; ++r)
        for (int cc = 0; cc < dim; ++cc) zx_new[r * dim + cc] = proj(r, cc);
    } else {
      zx_new = xr + ux;  // no cone on the variable itself
    }
    Eigen::VectorXd zv_new(n_slices);
    prox_all(vr + uv, zv_new);

    rpri = std::sqrt((x - zx_new).squaredNorm() + (v - zv_new).squaredNorm());
    sdua = rho * std::sqrt((zx_new - zx).squaredNorm() + (zv_new - zv).squaredNorm());

    ux += xr - zx_new;
    uv += vr - zv_new;
    zx.swap(zx_new);
    zv.swap(zv_new);

    report.residual_history.push_back(std::max(rpri, sdua));
    if (log.is_open() && it % opts.log_every == 0) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%d,%.12g,%.6e,%.6e\n", it, problem.eval(x), rpri, sdua);
      log << buf;
    }

    const double scale =
        std::max({x.norm(), zx.norm(), rho * std::sqrt(ux.squaredNorm() + uv.squaredNorm()), 1.0});
    const double eps = opts.eps_abs + opts.eps_rel * scale;
    if (rpri < eps && sdua < eps && it >= next_fixdev_check) {
      if (returned_matrix_ok()) {
        converged = true;
        break;
      }
      next_fixdev_check = it + 100;  // avoid extra eigendecompositions per iteration
    }
    // Residual balancing: the scaled-dual rescaling perturbs the iterate, so
    // it is rationed and disabled for the convergence tail (persistent
    // imbalance otherwise turns into a limit cycle on flat optimal faces).
    if (opts.adapt_rho && it % 50 == 49 && rho_changes < 30 && 2 * it < opts.max_iter) {
      if (rpri > 10.0 * sdua) {
        rho *= 2.0;
        ux *= 0.5;
        uv *= 0.5;
        ++rho_changes;
      } else if (sdua > 10.0 * rpri) {
        rho *= 0.5;
        ux *= 2.0;
        uv *= 2.0;
        ++rho_changes;
      }
    }
  }

  report.iterations = it + (it < opts.max_iter ? 1 : 0);
  report.primal_residual = rpri;
  report.dual_residual = sdua;

  if (problem.psd_cone) {
    // Returned matrix: PSD projection of the affine point, fixed entries
    // overwritten afterwards. The affine point carries the fixed entries
    // exactly, so on converged runs the overwrite shift is below eps.
    Eigen::MatrixXd xm(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int cc = 0; cc < dim; ++cc) xm(r, cc) = x[r * dim + cc] / (g[r] * g[cc]);
    xm = 0.5 * (xm + xm.transpose()).eval();
    Eigen::MatrixXd proj = clamp_psd(xm);
    for (const auto& f : problem.fixed_entries) proj(f.index / dim, f.index % dim) = f.value;
    proj = 0.5 * (proj + proj.transpose()).eval();
    report.X_hat = proj;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(proj, Eigen::EigenvaluesOnly);
    report.eigenvalues = eig.eigenvalues();
  } else {
    Eigen::VectorXd xout = x;
    for (int i = 0; i < n_vars; ++i) xout[i] /= entry_scale[i];
    report.X_hat = xout;
  }
  report.converged = converged;
  report.objective = problem.psd_cone ? problem.eval(report.X_hat)
                                      : problem.eval(Eigen::VectorXd(report.X_hat.col(0)));
  return report;
}

}  // namespace rpgo
