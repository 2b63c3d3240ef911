#include "repglm/representatives.hpp"

#include "repglm/kernels.hpp"
#include "repglm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace repglm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Relative threshold deciding that a score-matching denominator vanished.
double negligible(double value, double scale) { return std::abs(value) <= 1e-8 * (1.0 + scale); }

struct BlockPoints {
  std::vector<double> w;
  std::vector<double> y;
  std::vector<Vector> x;
  std::vector<std::vector<Index>> rows;
  std::vector<RepFallback> fallback;
  std::vector<double> eta_tilde;
  int bracket_failures = 0;
};

RepresentativeSet assemble(std::vector<BlockPoints>&& per_block, Index p, RepMethod method) {
  Index total = 0;
  for (const auto& b : per_block) total += static_cast<Index>(b.w.size());

  RepresentativeSet set;
  set.method = method;
  set.data.X.resize(total, p);
  set.data.y.resize(total);
  set.data.w.resize(total);
  set.source_block.reserve(static_cast<std::size_t>(total));
  set.rows.reserve(static_cast<std::size_t>(total));
  set.fallback.reserve(static_cast<std::size_t>(total));
  set.eta_tilde.reserve(static_cast<std::size_t>(total));

  Index at = 0;
  for (std::size_t b = 0; b < per_block.size(); ++b) {
    auto& bp = per_block[b];
    for (std::size_t j = 0; j < bp.w.size(); ++j) {
      set.data.X.row(at) = bp.x[j].transpose();
      set.data.y(at) = bp.y[j];
      set.data.w(at) = bp.w[j];
      set.source_block.push_back(static_cast<int>(b));
      set.rows.push_back(std::move(bp.rows[j]));
      set.fallback.push_back(bp.fallback[j]);
      set.eta_tilde.push_back(bp.eta_tilde[j]);
      ++at;
    }
    set.bracket_failures += bp.bracket_failures;
  }
  return set;
}

Vector block_mean_x(const Dataset& data, const std::vector<Index>& rows) {
  Vector m = Vector::Zero(data.n_cols());
  for (Index r : rows) m += data.X.row(r).transpose();
  return m / static_cast<double>(rows.size());
}

double block_mean_y(const Dataset& data, const std::vector<Index>& rows) {
  double s = 0;
  for (Index r : rows) s += data.y(r);
  return s / static_cast<double>(rows.size());
}

}  // namespace

const char* to_string(RepFallback f) {
  switch (f) {
    case RepFallback::none: return "none";
    case RepFallback::y_mean: return "y-mean";
    case RepFallback::x_mean: return "x-mean";
    case RepFallback::y_and_x_mean: return "y-mean|x-mean";
  }
  return "?";
}

int RepresentativeSet::fallback_count() const {
  int c = 0;
  for (RepFallback f : fallback)
    if (f != RepFallback::none) ++c;
  return c;
}

RepresentativeSet mean_representatives(const Dataset& data, const PartitionSpec& part) {
  const auto n_blocks = static_cast<int>(part.n_blocks());
  const Index p = data.n_cols();
  std::vector<BlockPoints> per_block(static_cast<std::size_t>(n_blocks));
  const int nt = parallel::max_threads();

  if (nt > 1) {
    // Block-parallel gathers; worthwhile when threads are available.
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int b = 0; b < n_blocks; ++b) {
      const auto& rows = part.blocks[static_cast<std::size_t>(b)];
      auto& bp = per_block[static_cast<std::size_t>(b)];
      bp.w.push_back(static_cast<double>(rows.size()));
      bp.y.push_back(block_mean_y(data, rows));
      bp.x.push_back(block_mean_x(data, rows));
      bp.rows.push_back(rows);
      bp.fallback.push_back(RepFallback::none);
      bp.eta_tilde.push_back(kNaN);
    }
  } else {
    // Single sequential sweep with per-block accumulators; bit-identical to
    // the gathers above because blocks store their rows ascending.
    const Index n = data.n_rows();
    std::vector<int> label(static_cast<std::size_t>(n));
    for (int b = 0; b < n_blocks; ++b)
      for (Index r : part.blocks[static_cast<std::size_t>(b)])
        label[static_cast<std::size_t>(r)] = b;
    std::vector<Vector> xsum(static_cast<std::size_t>(n_blocks), Vector::Zero(p));
    std::vector<double> ysum(static_cast<std::size_t>(n_blocks), 0.0);
    for (Index i = 0; i < n; ++i) {
      const auto b = static_cast<std::size_t>(label[static_cast<std::size_t>(i)]);
      xsum[b] += data.X.row(i).transpose();
      ysum[b] += data.y(i);
    }
    for (int b = 0; b < n_blocks; ++b) {
      const auto bi = static_cast<std::size_t>(b);
      const auto& rows = part.blocks[bi];
      const auto nk = static_cast<double>(rows.size());
      auto& bp = per_block[bi];
      bp.w.push_back(nk);
      bp.y.push_back(ysum[bi] / nk);
      bp.x.push_back(xsum[bi] / nk);
      bp.rows.push_back(rows);
      bp.fallback.push_back(RepFallback::none);
      bp.eta_tilde.push_back(kNaN);
    }
  }
  return assemble(std::move(per_block), p, RepMethod::mean);
}

RepresentativeSet median_representatives(const Dataset& data, const PartitionSpec& part) {
  const auto n_blocks = static_cast<int>(part.n_blocks());
  const Index p = data.n_cols();
  std::vector<BlockPoints> per_block(static_cast<std::size_t>(n_blocks));
  const int nt = parallel::max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (int b = 0; b < n_blocks; ++b) {
    const auto& rows = part.blocks[static_cast<std::size_t>(b)];
    auto& bp = per_block[static_cast<std::size_t>(b)];
    const auto nk = rows.size();
    Vector med(p);
    std::vector<double> col(nk);
    for (Index j = 0; j < p; ++j) {
      for (std::size_t i = 0; i < nk; ++i) col[i] = data.X(rows[i], j);
      std::sort(col.begin(), col.end());
      med(j) = nk % 2 ? col[nk / 2] : 0.5 * (col[nk / 2 - 1] + col[nk / 2]);
    }
    bp.w.push_back(static_cast<double>(nk));
    bp.y.push_back(block_mean_y(data, rows));  // response stays the block mean
    bp.x.push_back(std::move(med));
    bp.rows.push_back(rows);
    bp.fallback.push_back(RepFallback::none);
    bp.eta_tilde.push_back(kNaN);
  }
  return assemble(std::move(per_block), p, RepMethod::median);
}

RepresentativeSet midpoint_representatives(const Dataset& data, const PartitionSpec& part) {
  if (part.method != PartitionMethod::equal_depth || part.cell_index.size() != part.n_blocks())
    throw config_error("midpoint representatives require an equal-depth partition with its grid");

  const auto n_blocks = static_cast<int>(part.n_blocks());
  const Index p = data.n_cols();
  std::vector<BlockPoints> per_block(static_cast<std::size_t>(n_blocks));
  const int nt = parallel::max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (int b = 0; b < n_blocks; ++b) {
    const auto& rows = part.blocks[static_cast<std::size_t>(b)];
    auto& bp = per_block[static_cast<std::size_t>(b)];
    // Non-grid coordinates (intercept, unselected covariates): block mean.
    Vector x = block_mean_x(data, rows);
    const auto& cell = part.cell_index[static_cast<std::size_t>(b)];
    for (std::size_t jc = 0; jc < part.grid_columns.size(); ++jc) {
      const auto& cuts = part.cut_points[jc];
      const int c = cell[jc];
      const double lo = c == 0 ? part.column_range[jc].first : cuts[static_cast<std::size_t>(c - 1)];
      const double hi = c == static_cast<int>(cuts.size()) ? part.column_range[jc].second
                                                           : cuts[static_cast<std::size_t>(c)];
      x(part.grid_columns[jc]) = 0.5 * (lo + hi);
    }
    bp.w.push_back(static_cast<double>(rows.size()));
    bp.y.push_back(block_mean_y(data, rows));
    bp.x.push_back(std::move(x));
    bp.rows.push_back(rows);
    bp.fallback.push_back(RepFallback::none);
    bp.eta_tilde.push_back(kNaN);
  }
  return assemble(std::move(per_block), p, RepMethod::midpoint);
}

std::vector<std::vector<Index>> split_block_by_sign(const std::vector<Index>& rows,
                                                    const Vector& eta_all, double zero_tol) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Index r : rows) {
    lo = std::min(lo, eta_all(r));
    hi = std::max(hi, eta_all(r));
  }
  if (!(lo < -zero_tol && hi > zero_tol)) return {rows};

  std::vector<Index> nonneg, neg;
  for (Index r : rows)
    (eta_all(r) >= 0 ? nonneg : neg).push_back(r);
  std::vector<std::vector<Index>> out;
  if (!nonneg.empty()) out.push_back(std::move(nonneg));
  if (!neg.empty()) out.push_back(std::move(neg));
  return out;
}

namespace {

// Per-sub-block running sums.  The streaming builder accumulates these in one
// sequential pass; the row-list walks below produce the same sums in the same
// order (blocks store their rows ascending), so both construction paths are
// bit-identical.
struct SubBlockSums {
  double denom = 0;    // sum nu_i eta_i
  double numer = 0;    // sum nu_i eta_i y_i
  double scale = 0;    // sum |nu_i eta_i|
  double sum_y = 0;
  double target = 0;   // sum nu_i (y_i - G_i) eta_i
  double sum_eta = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  Vector xnum;  // sum nu_i (y_i - G_i) x_i
  Vector xsum;

  void init(Index p) {
    xnum = Vector::Zero(p);
    xsum = Vector::Zero(p);
  }
  void add(const GlmFamily& fam, double eta, double y, const Matrix& X, Index i) {
    const LinkEval e = link_eval(fam, eta);
    const double ne = e.nu * eta;
    denom += ne;
    numer += ne * y;
    scale += std::abs(ne);
    sum_y += y;
    target += e.nu * (y - e.mean) * eta;
    sum_eta += eta;
    lo = std::min(lo, eta);
    hi = std::max(hi, eta);
    xnum += e.nu * (y - e.mean) * X.row(i).transpose();
    xsum += X.row(i).transpose();
  }
};

SmrResponse response_from_sums(double denom, double numer, double scale, double sum_y,
                               double nk) {
  SmrResponse out;
  if (negligible(denom, scale)) {
    out.ytilde = sum_y / nk;
    out.fallback = true;
  } else {
    out.ytilde = numer / denom;
  }
  return out;
}

SmrPredictor predictor_from_sums(const GlmFamily& fam, const Vector& xnum, const Vector& xsum,
                                 double nk, double ytilde, double eta_tilde) {
  const LinkEval et = link_eval(fam, eta_tilde);
  const double denom = nk * et.nu * (ytilde - et.mean);
  const double scale = nk * std::abs(et.nu) * (std::abs(ytilde) + std::abs(et.mean));
  SmrPredictor out;
  if (negligible(denom, scale)) {
    out.x = xsum / nk;
    out.fallback = true;
  } else {
    out.x = xnum / denom;
  }
  return out;
}

EtaSolve solve_eta_interval(const GlmFamily& fam, double a, double b, double ytilde,
                            double target, double eta_bar);

}  // namespace

SmrResponse smr_response(const GlmFamily& fam, const std::vector<Index>& rows,
                         const Vector& eta_all, const Vector& y_all) {
  double denom = 0, numer = 0, scale = 0, ymean = 0;
  for (Index r : rows) {
    const double eta = eta_all(r);
    const double ne = link_eval(fam, eta).nu * eta;
    denom += ne;
    numer += ne * y_all(r);
    scale += std::abs(ne);
    ymean += y_all(r);
  }
  return response_from_sums(denom, numer, scale, ymean, static_cast<double>(rows.size()));
}

namespace {

double smr_score_curve(const GlmFamily& fam, double ytilde, double eta) {
  const LinkEval e = link_eval(fam, eta);
  return e.nu * (ytilde - e.mean) * eta;
}

}  // namespace

EtaSolve solve_eta(const GlmFamily& fam, const std::vector<Index>& rows, const Vector& eta_all,
                   double ytilde, double target, double eta_bar) {
  double a = std::numeric_limits<double>::infinity();
  double b = -std::numeric_limits<double>::infinity();
  for (Index r : rows) {
    a = std::min(a, eta_all(r));
    b = std::max(b, eta_all(r));
  }
  return solve_eta_interval(fam, a, b, ytilde, target, eta_bar);
}

namespace {

EtaSolve solve_eta_interval(const GlmFamily& fam, double a, double b, double ytilde,
                            double target, double eta_bar) {
  EtaSolve out;
  if (!(b > a)) {  // all rows share one eta value
    out.eta_tilde = a;
    return out;
  }

  std::vector<double> roots;
  const double edge_tol = 1e-9 * (1.0 + std::max(std::abs(a), std::abs(b)));

  if (fam.link == Link::identity) {
    // (ytilde - eta) * eta = target  =>  eta^2 - ytilde*eta + target = 0.
    const double disc = ytilde * ytilde - 4.0 * target;
    if (disc >= 0) {
      const double s = std::sqrt(disc);
      for (double r : {0.5 * (ytilde - s), 0.5 * (ytilde + s)})
        if (r >= a - edge_tol && r <= b + edge_tol) roots.push_back(std::clamp(r, a, b));
    }
  } else {
    // 64-interval scan for sign changes, bisection on each bracket.  The
    // bisection runs until the bracket can no longer be split in floating
    // point: the representative predictor is scaled by the curve value at the
    // root, so any leftover residual here reappears as a mismatch between
    // x~' beta and eta~ and erodes the score-matching identity.
    constexpr int kGrid = 64;
    double prev_eta = a;
    double prev_f = smr_score_curve(fam, ytilde, a) - target;
    if (prev_f == 0) roots.push_back(a);
    for (int j = 1; j <= kGrid; ++j) {
      const double eta = j == kGrid ? b : a + (b - a) * j / kGrid;
      const double f = smr_score_curve(fam, ytilde, eta) - target;
      if (f == 0) {
        roots.push_back(eta);
      } else if (prev_f != 0 && std::signbit(f) != std::signbit(prev_f)) {
        double lo = prev_eta, hi = eta, flo = prev_f, fhi = f;
        for (;;) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          const double fm = smr_score_curve(fam, ytilde, mid) - target;
          if (fm == 0) {
            lo = hi = mid;
            flo = fhi = 0;
            break;
          }
          if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
            fhi = fm;
          }
        }
        roots.push_back(std::abs(flo) <= std::abs(fhi) ? lo : hi);
      }
      prev_eta = eta;
      prev_f = f;
    }
  }

  if (roots.empty()) {
    out.eta_tilde = std::clamp(eta_bar, a, b);
    out.bracket_failed = true;
    return out;
  }
  // Nearest to the block's mean eta; ties to the smaller root.
  std::sort(roots.begin(), roots.end());
  double best = roots.front();
  double best_d = std::abs(best - eta_bar);
  for (double r : roots) {
    const double d = std::abs(r - eta_bar);
    if (d < best_d) {
      best = r;
      best_d = d;
    }
  }
  out.eta_tilde = best;
  return out;
}

}  // namespace

SmrPredictor smr_predictor(const GlmFamily& fam, const std::vector<Index>& rows,
                           const Matrix& X, const Vector& eta_all, const Vector& y_all,
                           double ytilde, double eta_tilde) {
  const Index p = X.cols();
  Vector numer = Vector::Zero(p);
  Vector mean = Vector::Zero(p);
  for (Index r : rows) {
    const LinkEval e = link_eval(fam, eta_all(r));
    numer += e.nu * (y_all(r) - e.mean) * X.row(r).transpose();
    mean += X.row(r).transpose();
  }
  return predictor_from_sums(fam, numer, mean, static_cast<double>(rows.size()), ytilde,
                             eta_tilde);
}

namespace {

void emit_singleton(BlockPoints& bp, const Dataset& data, const Vector& eta, Index r,
                    std::vector<Index>&& rows) {
  bp.w.push_back(1.0);
  bp.y.push_back(data.y(r));
  bp.x.push_back(data.X.row(r).transpose());
  bp.eta_tilde.push_back(eta(r));
  bp.fallback.push_back(RepFallback::none);
  bp.rows.push_back(std::move(rows));
}

void emit_sub_block(BlockPoints& bp, const GlmFamily& fam, const SubBlockSums& s, double nk,
                    std::vector<Index>&& rows) {
  const SmrResponse resp = response_from_sums(s.denom, s.numer, s.scale, s.sum_y, nk);
  const double target = s.target / nk;
  const double eta_bar = s.sum_eta / nk;
  const EtaSolve es = solve_eta_interval(fam, s.lo, s.hi, resp.ytilde, target, eta_bar);
  const SmrPredictor pred = predictor_from_sums(fam, s.xnum, s.xsum, nk, resp.ytilde,
                                                es.eta_tilde);

  auto flag = RepFallback::none;
  if (resp.fallback && pred.fallback)
    flag = RepFallback::y_and_x_mean;
  else if (resp.fallback)
    flag = RepFallback::y_mean;
  else if (pred.fallback)
    flag = RepFallback::x_mean;

  bp.w.push_back(nk);
  bp.y.push_back(resp.ytilde);
  bp.x.push_back(pred.x);
  bp.eta_tilde.push_back(es.eta_tilde);
  bp.fallback.push_back(flag);
  bp.rows.push_back(std::move(rows));
  if (es.bracket_failed) ++bp.bracket_failures;
}

// Block-parallel construction: each block walks its own row list.  Efficient
// when worker threads are available; the scattered row gathers are the price.
std::vector<BlockPoints> smr_build_blockwise(const Dataset& data, const PartitionSpec& part,
                                             const GlmFamily& fam, const Vector& eta) {
  const auto n_blocks = static_cast<int>(part.n_blocks());
  std::vector<BlockPoints> per_block(static_cast<std::size_t>(n_blocks));
  const int nt = parallel::max_threads();
  bool failed = false;
  std::string fail_msg;

#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (int b = 0; b < n_blocks; ++b) {
    try {
      auto& bp = per_block[static_cast<std::size_t>(b)];
      for (auto& sub : split_block_by_sign(part.blocks[static_cast<std::size_t>(b)], eta)) {
        if (sub.size() == 1) {
          // A singleton is its own exact representative.
          const Index r = sub[0];
          emit_singleton(bp, data, eta, r, std::move(sub));
          continue;
        }
        SubBlockSums s;
        s.init(data.n_cols());
        for (Index r : sub) s.add(fam, eta(r), data.y(r), data.X, r);
        emit_sub_block(bp, fam, s, static_cast<double>(sub.size()), std::move(sub));
      }
    } catch (const std::exception& e) {
#pragma omp critical
      {
        failed = true;
        fail_msg = e.what();
      }
    }
  }
  if (failed) throw domain_error(fail_msg);
  return per_block;
}

// Single-threaded construction: one sequential sweep over the rows with
// per-(block, sign) accumulator banks.  Avoids the scattered gathers of the
// blockwise path, which are latency-bound once the matrix outgrows the cache.
// Blocks store their rows ascending, so every accumulator sees its terms in
// the same order as the blockwise walk and the two paths are bit-identical.
std::vector<BlockPoints> smr_build_streaming(const Dataset& data, const PartitionSpec& part,
                                             const GlmFamily& fam, const Vector& eta) {
  const auto n_blocks = static_cast<int>(part.n_blocks());
  const Index n = data.n_rows();
  const Index p = data.n_cols();

  std::vector<int> label(static_cast<std::size_t>(n));
  for (int b = 0; b < n_blocks; ++b)
    for (Index r : part.blocks[static_cast<std::size_t>(b)])
      label[static_cast<std::size_t>(r)] = b;

  // Per-block eta span decides the sign splits (threshold as in
  // split_block_by_sign).
  constexpr double kZeroTol = 1e-12;
  std::vector<double> blo(static_cast<std::size_t>(n_blocks),
                          std::numeric_limits<double>::infinity());
  std::vector<double> bhi(static_cast<std::size_t>(n_blocks),
                          -std::numeric_limits<double>::infinity());
  for (Index i = 0; i < n; ++i) {
    const auto b = static_cast<std::size_t>(label[static_cast<std::size_t>(i)]);
    blo[b] = std::min(blo[b], eta(i));
    bhi[b] = std::max(bhi[b], eta(i));
  }

  std::vector<char> split(static_cast<std::size_t>(n_blocks));
  std::vector<int> bank0(static_cast<std::size_t>(n_blocks));
  int n_banks = 0;
  for (int b = 0; b < n_blocks; ++b) {
    const auto bi = static_cast<std::size_t>(b);
    split[bi] = blo[bi] < -kZeroTol && bhi[bi] > kZeroTol ? 1 : 0;
    bank0[bi] = n_banks;
    n_banks += split[bi] ? 2 : 1;
  }

  std::vector<SubBlockSums> banks(static_cast<std::size_t>(n_banks));
  std::vector<std::vector<Index>> bank_rows(static_cast<std::size_t>(n_banks));
  for (auto& bk : banks) bk.init(p);

  for (Index i = 0; i < n; ++i) {
    const auto bi = static_cast<std::size_t>(label[static_cast<std::size_t>(i)]);
    if (part.blocks[bi].size() == 1) continue;  // singleton blocks emit raw rows
    // Non-negative side first, matching split_block_by_sign.
    const int side = split[bi] && eta(i) < 0 ? 1 : 0;
    const auto slot = static_cast<std::size_t>(bank0[bi] + side);
    banks[slot].add(fam, eta(i), data.y(i), data.X, i);
    bank_rows[slot].push_back(i);
  }

  std::vector<BlockPoints> per_block(static_cast<std::size_t>(n_blocks));
  for (int b = 0; b < n_blocks; ++b) {
    const auto bi = static_cast<std::size_t>(b);
    auto& bp = per_block[bi];
    if (part.blocks[bi].size() == 1) {
      const Index r = part.blocks[bi][0];
      emit_singleton(bp, data, eta, r, std::vector<Index>{r});
      continue;
    }
    for (int side = 0; side <= (split[bi] ? 1 : 0); ++side) {
      const auto slot = static_cast<std::size_t>(bank0[bi] + side);
      auto& rows = bank_rows[slot];
      if (rows.size() == 1) {
        const Index r = rows[0];
        emit_singleton(bp, data, eta, r, std::move(rows));
        continue;
      }
      emit_sub_block(bp, fam, banks[slot], static_cast<double>(rows.size()), std::move(rows));
    }
  }
  return per_block;
}

}  // namespace

RepresentativeSet smr_representatives(const Dataset& data, const PartitionSpec& part,
                                      const GlmFamily& fam, const Vector& beta) {
  const Index p = data.n_cols();

  Vector eta;
  kernels::linear_predictor(data.X, beta, eta);

  std::vector<BlockPoints> per_block;
  if (parallel::max_threads() > 1) {
    per_block = smr_build_blockwise(data, part, fam, eta);
  } else {
    try {
      per_block = smr_build_streaming(data, part, fam, eta);
    } catch (const domain_error&) {
      throw;
    } catch (const std::exception& e) {
      throw domain_error(e.what());
    }
  }

  RepresentativeSet set = assemble(std::move(per_block), p, RepMethod::smr);
  set.build_beta = beta;
  return set;
}

SmrResult smr_fit(const Dataset& data, const PartitionSpec& part, const GlmFamily& fam,
                  const SmrOptions& opts) {
  if (opts.iterations < 0) throw config_error("iterations must be >= 0");
  SmrResult out;
  Vector beta;

  if (opts.init.size()) {
    if (opts.iterations < 1)
      throw config_error("an explicit starting point requires at least one iteration");
    beta = opts.init;
  } else {
    RepresentativeSet mr = mean_representatives(data, part);
    SolveOptions s0 = opts.solve;
    s0.init = Vector();
    FitResult f0 = fisher_scoring_fit(mr.data, fam, s0);
    beta = f0.beta;
    out.stage_fits.push_back(f0);
    out.fit = std::move(f0);
    if (opts.keep_history) out.history.push_back(std::move(mr));
  }

  for (int t = 1; t <= opts.iterations; ++t) {
    RepresentativeSet reps = smr_representatives(data, part, fam, beta);
    reps.iteration = t;
    SolveOptions st = opts.solve;
    st.init = beta;
    FitResult ft = fisher_scoring_fit(reps.data, fam, st);
    beta = ft.beta;
    out.total_fallbacks += reps.fallback_count();
    out.stage_fits.push_back(ft);
    out.fit = std::move(ft);
    if (opts.keep_history) out.history.push_back(std::move(reps));
  }
  return out;
}

void write_representatives(const std::string& path, const RepresentativeSet& reps) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw io_error("cannot open " + path + " for writing");
  std::fputs("block,weight,ytilde", f);
  for (Index j = 0; j < reps.data.n_cols(); ++j)
    std::fprintf(f, ",x%lld", static_cast<long long>(j + 1));
  std::fputs(",fallback\n", f);
  for (Index i = 0; i < reps.size(); ++i) {
    std::fprintf(f, "%d,%.17g,%.17g", reps.source_block[static_cast<std::size_t>(i)],
                 reps.data.w(i), reps.data.y(i));
    for (Index j = 0; j < reps.data.n_cols(); ++j) std::fprintf(f, ",%.17g", reps.data.X(i, j));
    std::fprintf(f, ",%s\n", to_string(reps.fallback[static_cast<std::size_t>(i)]));
  }
  std::fclose(f);
}

}  // namespace repglm
