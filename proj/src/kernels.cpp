#include "repglm/kernels.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace repglm::kernels {

namespace {

using parallel::chunk_range;
using parallel::num_chunks;

void eta_chunk(const Matrix& X, const Vector& beta, Vector& eta, Index lo, Index hi) {
  for (Index i = lo; i < hi; ++i) eta(i) = X.row(i).dot(beta);
}

// One chunk of the score/information sums.  The upper triangle of the
// information is accumulated and mirrored at the end.
void score_info_chunk(const Matrix& X, const Vector& y, const Vector* w, const GlmFamily& fam,
                      const Vector& beta, Index lo, Index hi, Vector& s, Matrix& F) {
  const Index p = X.cols();
  for (Index i = lo; i < hi; ++i) {
    const double eta = X.row(i).dot(beta);
    const LinkEval e = link_eval(fam, eta);
    const double wi = w ? (*w)(i) : 1.0;
    const double r = wi * e.nu * (y(i) - e.mean);
    const double q = wi * e.nu * e.dmean;
    for (Index a = 0; a < p; ++a) {
      const double xa = X(i, a);
      s(a) += r * xa;
      const double qxa = q * xa;
      for (Index b = a; b < p; ++b) F(a, b) += qxa * X(i, b);
    }
  }
}

void mirror_lower(Matrix& F) {
  const Index p = F.rows();
  for (Index a = 0; a < p; ++a)
    for (Index b = a + 1; b < p; ++b) F(b, a) = F(a, b);
}

void normal_eq_chunk(const Matrix& X, const Vector& y, const Vector* w, Index lo, Index hi,
                     Matrix& A, Vector& b) {
  const Index p = X.cols();
  for (Index i = lo; i < hi; ++i) {
    const double wi = w ? (*w)(i) : 1.0;
    const double wy = wi * y(i);
    for (Index a = 0; a < p; ++a) {
      const double xa = X(i, a);
      b(a) += wy * xa;
      const double wxa = wi * xa;
      for (Index c = a; c < p; ++c) A(a, c) += wxa * X(i, c);
    }
  }
}

}  // namespace

namespace serial {

void linear_predictor(const Matrix& X, const Vector& beta, Vector& eta) {
  eta.resize(X.rows());
  eta_chunk(X, beta, eta, 0, X.rows());
}

ScoreInfo score_info(const Matrix& X, const Vector& y, const Vector* w, const GlmFamily& fam,
                     const Vector& beta) {
  const Index n = X.rows();
  const Index p = X.cols();
  ScoreInfo out;
  out.score = Vector::Zero(p);
  out.info = Matrix::Zero(p, p);
  // Same chunked summation tree as the OpenMP path, executed in order.
  const int C = num_chunks(n);
  for (int c = 0; c < C; ++c) {
    auto [lo, hi] = chunk_range(n, c);
    Vector s = Vector::Zero(p);
    Matrix F = Matrix::Zero(p, p);
    score_info_chunk(X, y, w, fam, beta, lo, hi, s, F);
    out.score += s;
    out.info += F;
  }
  mirror_lower(out.info);
  out.finite = out.score.allFinite() && out.info.allFinite();
  return out;
}

void normal_equations(const Matrix& X, const Vector& y, const Vector* w, Matrix& xtwx,
                      Vector& xtwy) {
  const Index n = X.rows();
  const Index p = X.cols();
  xtwx = Matrix::Zero(p, p);
  xtwy = Vector::Zero(p);
  const int C = num_chunks(n);
  for (int c = 0; c < C; ++c) {
    auto [lo, hi] = chunk_range(n, c);
    Matrix A = Matrix::Zero(p, p);
    Vector b = Vector::Zero(p);
    normal_eq_chunk(X, y, w, lo, hi, A, b);
    xtwx += A;
    xtwy += b;
  }
  mirror_lower(xtwx);
}

}  // namespace serial

namespace omp {

void linear_predictor(const Matrix& X, const Vector& beta, Vector& eta) {
  const Index n = X.rows();
  eta.resize(n);
  const int C = num_chunks(n);
  const int nt = parallel::max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
  for (int c = 0; c < C; ++c) {
    auto [lo, hi] = chunk_range(n, c);
    eta_chunk(X, beta, eta, lo, hi);
  }
}

ScoreInfo score_info(const Matrix& X, const Vector& y, const Vector* w, const GlmFamily& fam,
                     const Vector& beta) {
  const Index n = X.rows();
  const Index p = X.cols();
  const int C = num_chunks(n);
  const int nt = parallel::max_threads();
  std::vector<Vector> ss(C);
  std::vector<Matrix> Fs(C);
  // Exceptions must not unwind out of the parallel region; capture the first
  // domain violation and rethrow after the join.
  bool domain_fail = false;
  std::string domain_msg;
#pragma omp parallel for schedule(static) num_threads(nt)
  for (int c = 0; c < C; ++c) {
    auto [lo, hi] = chunk_range(n, c);
    ss[c] = Vector::Zero(p);
    Fs[c] = Matrix::Zero(p, p);
    try {
      score_info_chunk(X, y, w, fam, beta, lo, hi, ss[c], Fs[c]);
    } catch (const domain_error& e) {
#pragma omp critical
      {
        domain_fail = true;
        domain_msg = e.what();
      }
    }
  }
  if (domain_fail) throw domain_error(domain_msg);
  ScoreInfo out;
  out.score = Vector::Zero(p);
  out.info = Matrix::Zero(p, p);
  // Merge partials in chunk order: the reduction tree matches the serial one.
  for (int c = 0; c < C; ++c) {
    out.score += ss[c];
    out.info += Fs[c];
  }
  mirror_lower(out.info);
  out.finite = out.score.allFinite() && out.info.allFinite();
  return out;
}

void normal_equations(const Matrix& X, const Vector& y, const Vector* w, Matrix& xtwx,
                      Vector& xtwy) {
  const Index n = X.rows();
  const Index p = X.cols();
  const int C = num_chunks(n);
  const int nt = parallel::max_threads();
  std::vector<Matrix> As(C);
  std::vector<Vector> bs(C);
#pragma omp parallel for schedule(static) num_threads(nt)
  for (int c = 0; c < C; ++c) {
    auto [lo, hi] = chunk_range(n, c);
    As[c] = Matrix::Zero(p, p);
    bs[c] = Vector::Zero(p);
    normal_eq_chunk(X, y, w, lo, hi, As[c], bs[c]);
  }
  xtwx = Matrix::Zero(p, p);
  xtwy = Vector::Zero(p);
  for (int c = 0; c < C; ++c) {
    xtwx += As[c];
    xtwy += bs[c];
  }
  mirror_lower(xtwx);
}

}  // namespace omp

// Dispatchers: the serial reference runs when only one thread is allowed.

void linear_predictor(const Matrix& X, const Vector& beta, Vector& eta) {
  if (parallel::max_threads() > 1)
    omp::linear_predictor(X, beta, eta);
  else
    serial::linear_predictor(X, beta, eta);
}

ScoreInfo score_info(const Matrix& X, const Vector& y, const Vector* w, const GlmFamily& fam,
                     const Vector& beta) {
  return parallel::max_threads() > 1 ? omp::score_info(X, y, w, fam, beta)
                                     : serial::score_info(X, y, w, fam, beta);
}

void normal_equations(const Matrix& X, const Vector& y, const Vector* w, Matrix& xtwx,
                      Vector& xtwy) {
  if (parallel::max_threads() > 1)
    omp::normal_equations(X, y, w, xtwx, xtwy);
  else
    serial::normal_equations(X, y, w, xtwx, xtwy);
}

}  // namespace repglm::kernels
