#include "locckit/opalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "locckit/random.hpp"

namespace locckit::opalg {

namespace {

Vec vectorize(const Mat& m) {
  Vec v(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

Mat devectorize(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  return m;
}

// Incremental Hilbert-Schmidt Gram-Schmidt over matrices.
struct SpanBuilder {
  Eigen::Index rows = 0, cols = 0;
  std::vector<Vec> basis;
  Tolerance tol;

  explicit SpanBuilder(Eigen::Index r, Eigen::Index c, const Tolerance& t)
      : rows(r), cols(c), tol(t) {}

  bool saturated() const { return static_cast<Eigen::Index>(basis.size()) == rows * cols; }

  // Returns true when the candidate enlarged the span.
  bool add(const Mat& m) {
    if (saturated()) return false;
    Vec v = vectorize(m);
    double scale = std::max(v.norm(), 1.0);
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& b : basis) v -= b.dot(v) * b;
    if (tol.value_zero(v.norm(), scale)) return false;
    basis.push_back(v.normalized());
    return true;
  }

  double residual(const Mat& m) const {
    Vec v = vectorize(m);
    for (const Vec& b : basis) v -= b.dot(v) * b;
    return v.norm();
  }

  std::vector<Mat> matrices() const {
    std::vector<Mat> out;
    out.reserve(basis.size());
    for (const Vec& b : basis) out.push_back(devectorize(b, rows, cols));
    return out;
  }
};

OperatorSpan finish_span(SpanBuilder& builder, Eigen::Index ambient, const Tolerance& tol) {
  OperatorSpan span;
  span.ambient_dim = ambient;
  span.basis = builder.matrices();
  span.contains_identity =
      tol.value_zero(builder.residual(Mat::Identity(ambient, ambient)), std::sqrt(double(ambient)));
  span.star_closed = true;
  for (const Mat& e : span.basis)
    if (!tol.value_zero(builder.residual(e.adjoint()), 1.0)) {
      span.star_closed = false;
      break;
    }
  return span;
}

}  // namespace

OperatorSpan make_span(const std::vector<Mat>& mats, const Tolerance& tol) {
  if (mats.empty()) throw InvalidParams("make_span: empty list");
  const Eigen::Index n = mats.front().rows();
  if (mats.front().cols() != n) throw InvalidParams("make_span: square matrices required");
  SpanBuilder builder(n, n, tol);
  for (const Mat& m : mats) {
    if (m.rows() != n || m.cols() != n)
      throw DimensionMismatch("make_span: matrices must share shape");
    builder.add(m);
  }
  return finish_span(builder, n, tol);
}

OperatorSpan operator_system_S0(const std::vector<Mat>& ops, const Tolerance& tol) {
  if (ops.empty()) throw InvalidParams("operator_system_S0: empty list");
  const Eigen::Index a = ops.front().cols();
  for (const Mat& b : ops)
    if (b.rows() != ops.front().rows() || b.cols() != a)
      throw DimensionMismatch("operator_system_S0: operators must share shape");
  SpanBuilder builder(a, a, tol);
  builder.add(Mat::Identity(a, a));
  for (size_t i = 0; i < ops.size() && !builder.saturated(); ++i)
    for (size_t j = 0; j < ops.size() && !builder.saturated(); ++j) {
      if (i == j) continue;
      builder.add(ops[i].adjoint() * ops[j]);
    }
  return finish_span(builder, a, tol);
}

OperatorSpan x_subspace(const std::vector<Mat>& ops, const Tolerance& tol) {
  if (ops.empty()) throw InvalidParams("x_subspace: empty list");
  const Eigen::Index a = ops.front().cols();
  for (const Mat& b : ops)
    if (b.rows() != ops.front().rows() || b.cols() != a)
      throw DimensionMismatch("x_subspace: operators must share shape");
  SpanBuilder builder(a, a, tol);
  for (size_t i = 0; i < ops.size() && !builder.saturated(); ++i)
    for (size_t j = 0; j < ops.size() && !builder.saturated(); ++j)
      builder.add(ops[i].adjoint() * ops[j]);
  return finish_span(builder, a, tol);
}

double closure_residual(const OperatorSpan& s, const Tolerance& tol) {
  const Eigen::Index n = s.ambient_dim;
  if (static_cast<Eigen::Index>(s.basis.size()) == n * n) return 0.0;
  SpanBuilder builder(n, n, tol);
  for (const Mat& e : s.basis) builder.add(e);
  double worst = 0.0;
  for (const Mat& p : s.basis)
    for (const Mat& q : s.basis) worst = std::max(worst, builder.residual(p * q));
  return worst;
}

bool is_multiplicatively_closed(const OperatorSpan& s, const Tolerance& tol) {
  return tol.value_zero(closure_residual(s, tol), 1.0);
}

OperatorSpan generated_algebra(const OperatorSpan& s, int max_rounds, const Tolerance& tol) {
  const Eigen::Index n = s.ambient_dim;
  SpanBuilder builder(n, n, tol);
  for (const Mat& e : s.basis) builder.add(e);
  for (const Mat& e : s.basis) builder.add(e.adjoint());

  for (int round = 0; round < max_rounds; ++round) {
    if (builder.saturated()) break;
    size_t before = builder.basis.size();
    std::vector<Mat> current = builder.matrices();
    for (const Mat& p : current) {
      for (const Mat& q : current) {
        builder.add(p * q);
        if (builder.saturated()) break;
      }
      if (builder.saturated()) break;
    }
    for (const Mat& e : builder.matrices()) builder.add(e.adjoint());
    if (builder.basis.size() == before) return finish_span(builder, n, tol);
  }
  if (builder.saturated()) return finish_span(builder, n, tol);
  throw NoConvergence("generated_algebra: dimension still growing after max_rounds");
}

bool has_separating_vector(const AlgebraStructure& st) {
  for (auto [m, nk] : st.blocks)
    if (nk < m) return false;
  return true;
}

std::optional<Vec> find_separating_vector(const OperatorSpan& alg, int attempts,
                                          const Tolerance& tol, unsigned seed) {
  const Eigen::Index n = alg.ambient_dim;
  const Eigen::Index dim = static_cast<Eigen::Index>(alg.basis.size());
  rnd::Rng rng(seed);
  for (int t = 0; t < attempts; ++t) {
    Vec psi = rnd::random_unit_vector(n, rng);
    Mat columns(n, dim);
    for (Eigen::Index p = 0; p < dim; ++p) columns.col(p) = alg.basis[p] * psi;
    if (linalg::rank(columns, tol) == dim) return psi;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Wedderburn decomposition
// ---------------------------------------------------------------------------

namespace {

struct HsProjector {
  std::vector<Vec> basis;  // orthonormal, vectorized
  Eigen::Index rows, cols;

  explicit HsProjector(const std::vector<Mat>& mats)
      : rows(mats.front().rows()), cols(mats.front().cols()) {
    for (const Mat& m : mats) basis.push_back(vectorize(m));
  }
  double residual(const Mat& m) const {
    Vec v = vectorize(m);
    for (const Vec& b : basis) v -= b.dot(v) * b;
    return v.norm();
  }
};

Mat random_combo(const std::vector<Mat>& mats, rnd::Rng& rng) {
  Mat out = Mat::Zero(mats.front().rows(), mats.front().cols());
  for (const Mat& m : mats) out += rnd::gaussian(rng) * m;
  return out;
}

Mat random_hermitian_combo(const std::vector<Mat>& mats, rnd::Rng& rng) {
  Mat c = random_combo(mats, rng);
  return (c + c.adjoint()) / 2.0;
}

// Commutant of the algebra spanned by `gens`: solved from a couple of random
// combinations (generically they generate), then verified against the whole
// list; falls back to the full stacked system when verification fails.
std::vector<Mat> algebra_commutant(const std::vector<Mat>& gens, const Tolerance& tol,
                                   rnd::Rng& rng) {
  auto verified = [&](const std::vector<Mat>& cand) {
    for (const Mat& x : cand)
      for (const Mat& g : gens)
        if (!tol.matrix_zero(x * g - g * x, std::max(1.0, x.norm() * g.norm()) * 10)) return false;
    return true;
  };
  for (int count = 2; count <= 4; count += 2) {
    std::vector<Mat> combos;
    for (int i = 0; i < count; ++i) combos.push_back(random_combo(gens, rng));
    std::vector<Mat> cand = linalg::commutant_basis(combos, tol);
    if (verified(cand)) return cand;
  }
  return linalg::commutant_basis(gens, tol);
}

// Principal-angle intersection of two HS-orthonormal spans.
std::vector<Mat> span_intersection(const std::vector<Mat>& a, const std::vector<Mat>& b) {
  const Eigen::Index n = a.front().rows();
  Mat qa(n * n, static_cast<Eigen::Index>(a.size()));
  Mat qb(n * n, static_cast<Eigen::Index>(b.size()));
  for (size_t p = 0; p < a.size(); ++p) qa.col(p) = vectorize(a[p]);
  for (size_t p = 0; p < b.size(); ++p) qb.col(p) = vectorize(b[p]);
  Eigen::JacobiSVD<Mat> svd(qa.adjoint() * qb, Eigen::ComputeFullU);
  std::vector<Mat> out;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1.0 - 1e-7)
      out.push_back(devectorize(qa * svd.matrixU().col(i), n, n));
  return out;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> cluster_eigenvalues(
    const Eigen::VectorXd& sorted, double gap) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i < sorted.size(); ++i)
    if (sorted(i) - sorted(i - 1) > gap) {
      clusters.emplace_back(start, i);
      start = i;
    }
  clusters.emplace_back(start, sorted.size());
  return clusters;
}

// Factorizes one central block (a simple algebra) into M_m (x) I_n
// coordinates; returns the d x d unitary whose column groups carry them.
Mat factor_block_coordinates(const std::vector<Mat>& compressed, Eigen::Index m, Eigen::Index n,
                             const Tolerance& tol, rnd::Rng& rng) {
  const Eigen::Index d = m * n;
  if (m == 1) return Mat::Identity(d, d);

  for (int attempt = 0; attempt < 8; ++attempt) {
    Mat r = random_hermitian_combo(compressed, rng);
    Eigen::SelfAdjointEigenSolver<Mat> solver(r);
    double spread = solver.eigenvalues().maxCoeff() - solver.eigenvalues().minCoeff();
    auto clusters = cluster_eigenvalues(solver.eigenvalues(), std::max(spread * 1e-7, 1e-11));
    if (static_cast<Eigen::Index>(clusters.size()) != m) continue;
    bool sizes_ok = true;
    for (auto [b, e] : clusters) sizes_ok = sizes_ok && (e - b == n);
    if (!sizes_ok) continue;

    std::vector<Mat> eigenframes;  // d x n each
    for (auto [b, e] : clusters)
      eigenframes.push_back(solver.eigenvectors().middleCols(b, e - b));

    Mat f = random_combo(compressed, rng);
    Mat coords(d, d);
    coords.leftCols(n) = eigenframes[0];
    bool ok = true;
    for (Eigen::Index i = 1; i < m && ok; ++i) {
      Mat t = eigenframes[i].adjoint() * f * eigenframes[0];  // ~ scalar * unitary
      double scale = t.norm() / std::sqrt(double(n));
      if (scale < 1e-8 ||
          !tol.matrix_zero(t.adjoint() * t - scale * scale * Mat::Identity(n, n),
                           std::max(scale * scale, 1.0) * 100)) {
        ok = false;
        break;
      }
      coords.middleCols(i * n, n) = eigenframes[i] * (t / scale);
    }
    if (!ok) continue;

    // Validate the A (x) I form on every algebra element.
    bool valid = true;
    for (const Mat& g : compressed) {
      Mat c = coords.adjoint() * g * coords;
      Mat amat = Mat::Zero(m, m);
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index k = 0; k < m; ++k) {
          Scalar avg = 0;
          for (Eigen::Index t2 = 0; t2 < n; ++t2) avg += c(i * n + t2, k * n + t2);
          amat(i, k) = avg / double(n);
        }
      if (!tol.matrix_zero(c - linalg::tensor(amat, Mat::Identity(n, n)),
                           std::max(g.norm(), 1.0) * 100)) {
        valid = false;
        break;
      }
    }
    if (valid) return coords;
  }
  throw NonIntegerStructure("wedderburn: failed to factor a central block into M_m (x) I_n");
}

}  // namespace

WedderburnDecomposition wedderburn_decompose(const OperatorSpan& alg, const Tolerance& tol,
                                             unsigned seed) {
  if (alg.basis.empty()) throw InvalidParams("wedderburn_decompose: empty span");
  if (!alg.star_closed) throw NotClosed("wedderburn_decompose: span is not star-closed");
  if (!is_multiplicatively_closed(alg, tol))
    throw NotClosed("wedderburn_decompose: span is not multiplicatively closed");
  rnd::Rng rng(seed);
  const Eigen::Index n = alg.ambient_dim;

  // Restrict to the support of the algebra.
  Mat t = Mat::Zero(n, n);
  for (const Mat& e : alg.basis) t += e * e.adjoint();
  Eigen::SelfAdjointEigenSolver<Mat> tsolver(t);
  double tmax = tsolver.eigenvalues().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (tsolver.eigenvalues()(i) > tol.singular_cutoff(tmax)) keep.push_back(i);
  const Eigen::Index s = static_cast<Eigen::Index>(keep.size());
  Mat support(n, s);
  for (Eigen::Index i = 0; i < s; ++i) support.col(i) = tsolver.eigenvectors().col(keep[i]);

  std::vector<Mat> restricted;
  restricted.reserve(alg.basis.size());
  for (const Mat& e : alg.basis) restricted.push_back(support.adjoint() * e * support);

  // The restricted algebra must be unital.
  {
    HsProjector proj(restricted);
    if (!tol.value_zero(proj.residual(Mat::Identity(s, s)), std::sqrt(double(s))))
      throw NotClosed("wedderburn_decompose: algebra has no unit on its support");
  }

  // Center = algebra ∩ commutant, as a Hermitian-closed orthonormal span.
  std::vector<Mat> comm = algebra_commutant(restricted, tol, rng);
  std::vector<Mat> center_raw = span_intersection(restricted, comm);
  if (center_raw.empty()) throw NotClosed("wedderburn_decompose: empty center");
  std::vector<Mat> center_herm;
  for (const Mat& z : center_raw) {
    center_herm.push_back((z + z.adjoint()) / 2.0);
    center_herm.push_back(Scalar(0, 1) * (z - z.adjoint()) / 2.0);
  }
  SpanBuilder center_builder(s, s, tol);
  for (const Mat& z : center_herm) center_builder.add(z);
  std::vector<Mat> center = center_builder.matrices();
  const Eigen::Index num_blocks = static_cast<Eigen::Index>(center.size());

  // Minimal central projections from a generic central Hermitian element.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;
  Mat central_vectors;
  bool clustered = false;
  for (int attempt = 0; attempt < 8 && !clustered; ++attempt) {
    Mat h = random_hermitian_combo(center, rng);
    Eigen::SelfAdjointEigenSolver<Mat> solver(h);
    double spread = solver.eigenvalues().maxCoeff() - solver.eigenvalues().minCoeff();
    clusters = cluster_eigenvalues(solver.eigenvalues(), std::max(spread * 1e-7, 1e-11));
    if (static_cast<Eigen::Index>(clusters.size()) == num_blocks) {
      central_vectors = solver.eigenvectors();
      clustered = true;
    }
  }
  if (!clustered)
    throw NonIntegerStructure("wedderburn_decompose: could not split the center spectrum");

  WedderburnDecomposition out;
  out.transform = Mat::Zero(n, s);
  Eigen::Index offset = 0;
  std::vector<std::tuple<Eigen::Index, Eigen::Index, Mat>> block_data;  // (m, n_k, columns)
  for (auto [b, e] : clusters) {
    const Eigen::Index dk = e - b;
    Mat wk = central_vectors.middleCols(b, dk);
    std::vector<Mat> compressed_all;
    SpanBuilder block_builder(dk, dk, tol);
    for (const Mat& g : restricted) block_builder.add(wk.adjoint() * g * wk);
    std::vector<Mat> compressed = block_builder.matrices();
    const Eigen::Index block_alg_dim = static_cast<Eigen::Index>(compressed.size());
    double mf = std::sqrt(double(block_alg_dim));
    Eigen::Index m = static_cast<Eigen::Index>(std::llround(mf));
    if (std::abs(mf - double(m)) > 1e-6)
      throw NonIntegerStructure("wedderburn_decompose: block dimension is not a perfect square");
    if (dk % m != 0)
      throw NonIntegerStructure("wedderburn_decompose: multiplicity is not an integer");
    Eigen::Index nk = dk / m;
    Mat coords = factor_block_coordinates(compressed, m, nk, tol, rng);
    block_data.emplace_back(m, nk, wk * coords);
  }

  // Canonical ordering: sort blocks by (m, n) for a deterministic multiset.
  std::sort(block_data.begin(), block_data.end(), [](const auto& x, const auto& y) {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
    return std::get<1>(x) < std::get<1>(y);
  });
  for (auto& [m, nk, cols] : block_data) {
    out.structure.blocks.emplace_back(m, nk);
    out.structure.algebra_dim += m * m;
    out.structure.support_dim += m * nk;
    out.block_offsets.push_back(offset);
    out.transform.middleCols(offset, m * nk) = support * cols;
    offset += m * nk;
  }
  return out;
}

AlgebraStructure wedderburn_structure(const OperatorSpan& alg, const Tolerance& tol,
                                      unsigned seed) {
  return wedderburn_decompose(alg, tol, seed).structure;
}

// ---------------------------------------------------------------------------
// Trace vectors and constant-diagonal unitaries
// ---------------------------------------------------------------------------

std::vector<Mat> weyl_operators(Eigen::Index m) {
  Mat shift = Mat::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) shift((i + 1) % m, i) = 1.0;
  Mat clock = Mat::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    clock(i, i) = std::polar(1.0, 2.0 * M_PI * double(i) / double(m));
  std::vector<Mat> out;
  Mat xp = Mat::Identity(m, m);
  for (Eigen::Index p = 0; p < m; ++p) {
    Mat zq = Mat::Identity(m, m);
    for (Eigen::Index q = 0; q < m; ++q) {
      out.push_back(xp * zq);
      zq = zq * clock;
    }
    xp = xp * shift;
  }
  return out;
}

std::optional<Mat> trace_vector_basis(
    const std::vector<std::pair<Eigen::Index, Eigen::Index>>& blocks) {
  if (blocks.empty()) return std::nullopt;
  const auto [m, nk] = blocks.front();
  for (auto [mm, nn] : blocks)
    if (mm != m || nn != nk) return std::nullopt;
  if (nk % m != 0) return std::nullopt;
  const Eigen::Index g = nk / m;
  const Eigen::Index j = static_cast<Eigen::Index>(blocks.size());
  const Eigen::Index r = j * m * nk;

  std::vector<Mat> paulis = weyl_operators(m);
  Mat basis(r, r);
  Eigen::Index col = 0;
  for (Eigen::Index a = 0; a < m * m; ++a)
    for (Eigen::Index c = 0; c < g; ++c)
      for (Eigen::Index b = 0; b < j; ++b) {
        // Block component: phased copies of one Pauli tiled across the
        // multiplicity, scaled so V V^dag = (n_k / r) I_m.
        Mat v(m, nk);
        for (Eigen::Index tile = 0; tile < g; ++tile)
          v.middleCols(tile * m, m) =
              std::polar(1.0, 2.0 * M_PI * double(c * tile) / double(g)) * paulis[a];
        v /= std::sqrt(double(g * m * j));
        Vec column = Vec::Zero(r);
        for (Eigen::Index k = 0; k < j; ++k) {
          Scalar phase = std::polar(1.0, 2.0 * M_PI * double(b * k) / double(j));
          for (Eigen::Index row = 0; row < m; ++row)
            for (Eigen::Index cc = 0; cc < nk; ++cc)
              column(k * m * nk + row * nk + cc) = phase * v(row, cc);
        }
        basis.col(col++) = column;
      }
  return basis;
}

Mat constant_diagonal_unitary(const AlgebraStructure& st) {
  for (auto [m, nk] : st.blocks)
    if (m != nk)
      throw NotSquareBlocks("constant_diagonal_unitary: rectangular blocks are out of scope");
  for (auto [m, nk] : st.blocks)
    if (m != st.blocks.front().first)
      throw NotSquareBlocks(
          "constant_diagonal_unitary: mixed square block sizes are not supported by the "
          "implemented construction");
  auto basis = trace_vector_basis(st.blocks);
  if (!basis)
    throw NotSquareBlocks("constant_diagonal_unitary: no constructible trace-vector basis");
  return basis->adjoint();  // rows of U are the trace vectors
}

}  // namespace locckit::opalg
