#include "qthermo/gauge.hpp"

#include <cmath>
#include <utility>

#include "qthermo/eig.hpp"
#include "qthermo/errors.hpp"
#include "qthermo/numerics.hpp"

namespace qthermo {

int GaugeStructure::dim() const {
  int d = 0;
  for (const int n : block_sizes) d += n;
  return d;
}

int GaugeStructure::block_start(int k) const {
  int start = 0;
  for (int i = 0; i < k; ++i) start += block_sizes[static_cast<std::size_t>(i)];
  return start;
}

GaugeStructure GaugeStructure::from_decomposition(const SpectralDecomposition& decomp) {
  GaugeStructure s;
  s.block_sizes = decomp.multiplicities;
  s.frame = decomp.frame;
  return s;
}

bool is_gauge_element(const ComplexMatrix& v, const ComplexMatrix& h, double tol) {
  require_same_dim(v, h, "is_gauge_element");
  if (v.unitarity_error() >= tol) return false;
  return commutator(v, h).max_abs() < tol;
}

std::vector<ComplexMatrix> sample_gauge_blocks(const GaugeStructure& s, RandomStream& rng) {
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(s.block_sizes.size());
  for (const int n : s.block_sizes) blocks.push_back(haar_unitary(n, rng));
  return blocks;
}

ComplexMatrix assemble_block_diagonal(const GaugeStructure& s,
                                      const std::vector<ComplexMatrix>& blocks) {
  if (blocks.size() != s.block_sizes.size())
    throw DimensionMismatch("assemble_block_diagonal: block count mismatch");
  ComplexMatrix b(s.dim());
  for (int k = 0; k < s.block_count(); ++k) {
    const int start = s.block_start(k);
    const int nk = s.block_sizes[static_cast<std::size_t>(k)];
    const ComplexMatrix& vk = blocks[static_cast<std::size_t>(k)];
    if (vk.dim() != nk) throw DimensionMismatch("assemble_block_diagonal: block size mismatch");
    for (int i = 0; i < nk; ++i)
      for (int j = 0; j < nk; ++j) b(start + i, start + j) = vk(i, j);
  }
  return b;
}

GaugeElement sample_gauge_element(const GaugeStructure& s, RandomStream& rng) {
  GaugeElement e;
  e.blocks = sample_gauge_blocks(s, rng);
  e.matrix = conjugate_by(s.frame, assemble_block_diagonal(s, e.blocks));
  return e;
}

MonteCarloEstimate group_average(const std::function<double(const DensityMatrix&)>& functional,
                                 const DensityMatrix& rho, const GaugeStructure& s, int samples,
                                 RandomStream& rng) {
  if (samples < 2) throw InvalidArgument("group_average: need at least 2 samples");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const GaugeElement v = sample_gauge_element(s, rng);
    const double value = functional(DensityMatrix(conjugate_by(v.matrix, rho.mat)));
    sum += value;
    sum_sq += value * value;
  }
  MonteCarloEstimate out;
  out.samples = samples;
  out.estimate = sum / samples;
  const double var = std::max(0.0, (sum_sq - sum * sum / samples) / (samples - 1));
  out.std_error = std::sqrt(var / samples);
  return out;
}

TwirlResult block_average_oracle(const ComplexMatrix& m, const GaugeStructure& s, int samples,
                                 RandomStream& rng) {
  if (m.dim() != s.dim()) throw DimensionMismatch("block_average_oracle: dimension mismatch");
  if (samples < 1) throw InvalidArgument("block_average_oracle: need at least 1 sample");
  const ComplexMatrix m_frame = conjugate_by_adjoint(s.frame, m);
  const int d = m.dim();
  ComplexMatrix acc(d);
  for (int i = 0; i < samples; ++i) {
    const ComplexMatrix b = assemble_block_diagonal(s, sample_gauge_blocks(s, rng));
    acc += b.adjoint() * m_frame * b;
  }
  acc *= 1.0 / samples;

  TwirlResult out;
  out.averaged = acc;
  double defect = 0.0;
  for (int k = 0; k < s.block_count(); ++k) {
    const int start = s.block_start(k);
    const int nk = s.block_sizes[static_cast<std::size_t>(k)];
    Complex block_mean{0.0, 0.0};
    for (int i = 0; i < nk; ++i) block_mean += acc(start + i, start + i);
    block_mean /= static_cast<double>(nk);
    for (int i = 0; i < nk; ++i)
      for (int j = 0; j < nk; ++j) {
        const Complex expected = (i == j) ? block_mean : Complex{0.0, 0.0};
        defect = std::max(defect, std::abs(acc(start + i, start + j) - expected));
      }
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      // off-diagonal blocks must vanish entirely
      bool same_block = false;
      for (int k = 0; k < s.block_count(); ++k) {
        const int start = s.block_start(k);
        const int end = start + s.block_sizes[static_cast<std::size_t>(k)];
        if (i >= start && i < end && j >= start && j < end) same_block = true;
      }
      if (!same_block) defect = std::max(defect, std::abs(acc(i, j)));
    }
  out.block_scalar_defect = defect;
  return out;
}

GaugePath GaugePath::fixed(std::vector<int> block_sizes, std::vector<ComplexMatrix> blocks) {
  GaugePath p;
  p.block_sizes_ = std::move(block_sizes);
  p.start_blocks_ = std::move(blocks);
  p.time_dependent_ = false;
  return p;
}

GaugePath GaugePath::sample_fixed(const GaugeStructure& s, RandomStream& rng) {
  return fixed(s.block_sizes, sample_gauge_blocks(s, rng));
}

GaugePath GaugePath::sample_geodesic(const GaugeStructure& s, double tau, RandomStream& rng,
                                     double generator_scale) {
  if (tau <= 0.0) throw InvalidArgument("GaugePath: tau must be positive");
  GaugePath p;
  p.block_sizes_ = s.block_sizes;
  p.start_blocks_ = sample_gauge_blocks(s, rng);
  p.time_dependent_ = true;
  p.tau_ = tau;
  for (const int n : s.block_sizes) {
    ComplexMatrix theta(n);
    for (int i = 0; i < n; ++i) {
      theta(i, i) = generator_scale * rng.gaussian();
      for (int j = i + 1; j < n; ++j) {
        const Complex z = generator_scale * rng.complex_gaussian();
        theta(i, j) = z;
        theta(j, i) = std::conj(z);
      }
    }
    const HermitianEig eig = hermitian_eig(theta);
    p.generator_vectors_.push_back(eig.vectors);
    p.generator_angles_.push_back(eig.eigenvalues);
  }
  return p;
}

int GaugePath::dim() const {
  int d = 0;
  for (const int n : block_sizes_) d += n;
  return d;
}

std::vector<ComplexMatrix> GaugePath::blocks_matrices_at(double t) const {
  std::vector<ComplexMatrix> blocks = start_blocks_;
  if (!time_dependent_) return blocks;
  const double s = t / tau_;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const ComplexMatrix& w = generator_vectors_[k];
    const auto& angles = generator_angles_[k];
    const int n = w.dim();
    ComplexMatrix phases(n);
    for (int j = 0; j < n; ++j) {
      const double a = s * angles[static_cast<std::size_t>(j)];
      phases(j, j) = Complex(std::cos(a), std::sin(a));
    }
    blocks[k] = blocks[k] * (w * phases * w.adjoint());
  }
  return blocks;
}

ComplexMatrix GaugePath::blocks_at(double t) const {
  GaugeStructure s;
  s.block_sizes = block_sizes_;
  return assemble_block_diagonal(s, blocks_matrices_at(t));
}

ComplexMatrix GaugePath::blocks_rate_at(double t) const {
  const int d = dim();
  if (!time_dependent_) return ComplexMatrix(d);
  const auto blocks = blocks_matrices_at(t);
  GaugeStructure s;
  s.block_sizes = block_sizes_;
  std::vector<ComplexMatrix> rates;
  rates.reserve(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const ComplexMatrix& w = generator_vectors_[k];
    const auto& angles = generator_angles_[k];
    const int n = w.dim();
    ComplexMatrix i_theta(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Complex acc{0.0, 0.0};
        for (int l = 0; l < n; ++l)
          acc += w(i, l) * angles[static_cast<std::size_t>(l)] * std::conj(w(j, l));
        i_theta(i, j) = Complex{0.0, 1.0} * acc / tau_;
      }
    rates.push_back(blocks[k] * i_theta);
  }
  return assemble_block_diagonal(s, rates);
}

ComplexMatrix GaugePath::element_at(double t, const ComplexMatrix& frame) const {
  return conjugate_by(frame, blocks_at(t));
}

ComplexMatrix GaugePath::element_rate_at(double t, const ComplexMatrix& frame,
                                         const ComplexMatrix& overlaps) const {
  const ComplexMatrix b = blocks_at(t);
  const ComplexMatrix bdot = blocks_rate_at(t);
  const ComplexMatrix udot = frame * overlaps;
  return udot * b * frame.adjoint() + frame * bdot * frame.adjoint() +
         frame * b * udot.adjoint();
}

}  // namespace qthermo
