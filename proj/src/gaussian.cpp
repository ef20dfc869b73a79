#include "momentlab/gaussian.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "momentlab/errors.hpp"
#include "momentlab/rng.hpp"
#include "momentlab/trace.hpp"

namespace momentlab {

namespace {

std::atomic<unsigned> g_threads{0};

unsigned threads_from_env() {
  if (const char* env = std::getenv("MOMENTLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct BlockRange {
  std::uint64_t begin;
  std::uint64_t end;
};

BlockRange block_range(const McConfig& cfg, std::uint32_t b) {
  const std::uint64_t n = cfg.samples, s = cfg.streams;
  return {n * b / s, n * (b + 1) / s};
}

void check_config(const McConfig& cfg) {
  require(cfg.samples > 0, ErrorKind::InvalidArgument, "samples must be positive");
  require(cfg.streams > 0, ErrorKind::InvalidArgument, "streams must be positive");
}

// Runs task(b) for every block, spread over the worker threads.  Each task
// writes only its own slot, so scheduling cannot change results.
void run_blocks(std::uint32_t blocks, const std::function<void(std::uint32_t)>& task) {
  const unsigned nthreads = std::min<unsigned>(worker_threads(), blocks);
  if (nthreads <= 1) {
    for (std::uint32_t b = 0; b < blocks; ++b) task(b);
    return;
  }
  std::atomic<std::uint32_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (std::uint32_t b = next++; b < blocks; b = next++) {
        try {
          task(b);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// Fills z with the standard normals of global sample `index`.
void draw_normals(const Philox4x32& gen, std::uint32_t block, std::uint64_t index, Vector& z) {
  const Eigen::Index r = z.size();
  const std::uint64_t pairs = static_cast<std::uint64_t>((r + 1) / 2);
  for (Eigen::Index j = 0; j < r; j += 2) {
    const auto [a, b] = normal_pair(gen, index * pairs + static_cast<std::uint64_t>(j / 2), block);
    z(j) = a;
    if (j + 1 < r) z(j + 1) = b;
  }
}

}  // namespace

unsigned worker_threads() {
  const unsigned t = g_threads.load();
  return t > 0 ? t : threads_from_env();
}

void set_worker_threads(unsigned n) { g_threads.store(n); }

GaussianMeasure::GaussianMeasure(GramForm q, bool quotient) : q_(std::move(q)) {
  require(quotient || q_.rank() == q_.dim(), ErrorKind::SingularForm,
          "Gaussian measure needs a form with trivial kernel; rank " + std::to_string(q_.rank()) +
              " < " + std::to_string(q_.dim()));
  w_ = q_.whitening();
}

void GaussianMeasure::for_each_sample(
    const McConfig& cfg, const std::function<void(std::uint32_t, const Vector&)>& visit) const {
  check_config(cfg);
  const Philox4x32 gen(cfg.seed);
  run_blocks(cfg.streams, [&](std::uint32_t b) {
    Vector z(rank());
    Vector v(dim());
    const auto range = block_range(cfg, b);
    for (std::uint64_t i = range.begin; i < range.end; ++i) {
      draw_normals(gen, b, i, z);
      v.noalias() = w_ * z;
      visit(b, v);
    }
  });
}

Matrix GaussianMeasure::sample(const McConfig& cfg) const {
  check_config(cfg);
  Matrix out(dim(), static_cast<Eigen::Index>(cfg.samples));
  const Philox4x32 gen(cfg.seed);
  run_blocks(cfg.streams, [&](std::uint32_t b) {
    Vector z(rank());
    const auto range = block_range(cfg, b);
    for (std::uint64_t i = range.begin; i < range.end; ++i) {
      draw_normals(gen, b, i, z);
      out.col(static_cast<Eigen::Index>(i)).noalias() = w_ * z;
    }
  });
  return out;
}

McEstimate mc_mean(const GaussianMeasure& g, const McConfig& cfg,
                   const std::function<double(const Vector&)>& f) {
  struct Moments {
    double n = 0, mean = 0, m2 = 0;
  };
  std::vector<Moments> blocks(cfg.streams);
  g.for_each_sample(cfg, [&](std::uint32_t b, const Vector& v) {
    Moments& m = blocks[b];
    const double x = f(v);
    m.n += 1;
    const double d = x - m.mean;
    m.mean += d / m.n;
    m.m2 += d * (x - m.mean);
  });
  // Chan et al. pairwise merge, always in block order.
  Moments total;
  for (const Moments& m : blocks) {
    if (m.n == 0) continue;
    const double n = total.n + m.n;
    const double d = m.mean - total.mean;
    total.mean += d * m.n / n;
    total.m2 += m.m2 + d * d * total.n * m.n / n;
    total.n = n;
  }
  const double var = total.n > 1 ? total.m2 / (total.n - 1) : 0.0;
  return {total.mean, std::sqrt(var / total.n), cfg.samples, cfg.seed};
}

SecondMomentReport second_moment_check(const GaussianMeasure& g, const Vector& w, const McConfig& cfg) {
  const double norm = g.form()(w);
  require(norm > 0.0, ErrorKind::ZeroNormDirection, "direction has zero q-norm");
  const Vector b = g.form().gram() * (w / norm);
  SecondMomentReport r;
  r.mc = mc_mean(g, cfg, [&](const Vector& v) {
    const double x = v.dot(b);
    return x * x;
  });
  // <v, w>_q = z . (W^T G w) and W^T G w has unit length when q(w) = 1,
  // so the integral is exactly 1; the computed length is kept as a check.
  r.identity_error = std::abs((g.whitening().transpose() * b).squaredNorm() - 1.0);
  r.within = std::abs(r.mc.estimate - r.exact) <= 4.0 * r.mc.std_error;
  return r;
}

namespace {
constexpr double kScopeTol = 1e-12;
}  // namespace

double normal_two_sided_tail(double t) { return std::erfc(std::abs(t) / std::sqrt(2.0)); }

TailReport tail_lower_bound_check(const GaussianMeasure& g, const DualFunctional& l) {
  // l(v) = (W^T l) . z, so its law is N(0, |W^T l|^2); |W^T l| is q'(l)
  // whenever l is q-continuous.
  const auto dual = dual_norm(g.form(), l);
  TailReport r;
  if (dual.is_infinite()) {
    r.dual_norm = INFINITY;
    r.exact = 1.0;
  } else {
    r.dual_norm = dual.value();
    // Dual norms computed for functionals scaled to q'(l) = 1 land within
    // rounding of 1.
    require(r.dual_norm >= 1.0 - kScopeTol, ErrorKind::NotInScope,
            "tail bound needs q'(l) >= 1, got " + std::to_string(r.dual_norm));
    r.exact = normal_two_sided_tail(1.0 / r.dual_norm);
  }
  r.ok = r.exact >= r.bound;
  return r;
}

BallTailReport chebyshev_outside_ball(const GaussianMeasure& g, const GramForm& p, double delta,
                                      const McConfig& cfg) {
  require(delta > 0.0, ErrorKind::InvalidArgument, "delta must be positive");
  const auto tr = trace(p, g.form()).value;
  require(tr.is_finite(), ErrorKind::KernelNotContained, "tr(p/q) is infinite");
  BallTailReport r;
  const double d2 = delta * delta;
  r.mc = mc_mean(g, cfg, [&](const Vector& v) { return p.quadratic(v) > d2 ? 1.0 : 0.0; });
  r.bound = tr.value() / d2;
  r.ok = r.mc.estimate <= r.bound + 4.0 * r.mc.std_error;
  return r;
}

FundamentalLemmaReport fundamental_lemma_check(const DiscreteMeasure& mu, const GramForm& p,
                                               const GramForm& q, double eps, double delta) {
  require(eps > 0.0 && delta > 0.0, ErrorKind::InvalidArgument, "eps and delta must be positive");
  require(mu.dim() == p.dim() && p.dim() == q.dim(), ErrorKind::DimensionMismatch,
          "measure and forms live on different dimensions");
  const auto tr = trace(p, q).value;
  require(tr.is_finite(), ErrorKind::KernelNotContained, "tr(p/q) is infinite");

  FundamentalLemmaReport r;
  r.eps = eps;
  r.delta = delta;
  r.trace = tr.value();
  // sup over p(v) <= delta of sum_j w_j l_j(v)^2.
  const auto top = generalized_max_eigenvalue(mu.second_moment_matrix(), p.gram(), p.psd_tol());
  r.hypothesis_value = top.is_finite() ? ExtendedReal::finite(delta * delta * top.value()) : top;
  r.certified = r.hypothesis_value.is_finite() && r.hypothesis_value.value() <= eps;

  for (std::size_t j = 0; j < mu.size(); ++j) {
    const auto norm = dual_norm(q, mu.atom(j));
    if (norm.is_finite() && norm.value() <= 1.0 + 1e-12) r.mass += mu.weight(j);
  }
  r.bound = 1.0 - 7.0 * (eps + r.trace / (delta * delta));
  r.holds = r.mass >= r.bound;
  return r;
}

}  // namespace momentlab
