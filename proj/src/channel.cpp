#include "opcqkd/channel.hpp"

#include <stdexcept>
#include <string>

namespace opcqkd::channel {

namespace {

constexpr double kSegmentTol = 1e-10;

int even_dim_of(const CMat& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 2 || m.rows() % 2 != 0) {
    throw std::invalid_argument(std::string(who) +
                                ": expected a square matrix of even dimension");
  }
  return static_cast<int>(m.rows());
}

}  // namespace

ModeLabel ModeLabel::from_index(int flat, int n_cores) {
  if (flat < 0 || flat >= 2 * n_cores) {
    throw std::out_of_range("ModeLabel::from_index: index outside [0, 2N)");
  }
  return ModeLabel{flat / 2 + 1,
                   flat % 2 == 0 ? Polarization::H : Polarization::V};
}

ChannelSegment::ChannelSegment(CMat fwd, SegmentKind k, double z)
    : forward(std::move(fwd)), kind(k), z_length(z) {
  even_dim_of(forward, "ChannelSegment");
  if (!linalg::is_unitary(forward, kSegmentTol)) {
    throw std::invalid_argument("ChannelSegment: forward matrix is not unitary");
  }
  if (kind == SegmentKind::SymmetricCoupling &&
      !linalg::is_symmetric(forward, kSegmentTol)) {
    throw std::invalid_argument(
        "ChannelSegment: symmetric-coupling segment has a non-symmetric matrix");
  }
}

CMat hwp_matrix(int n_cores) {
  if (n_cores < 1) throw std::invalid_argument("hwp_matrix: n_cores < 1");
  CMat d = CMat::Zero(2 * n_cores, 2 * n_cores);
  for (int k = 0; k < 2 * n_cores; ++k) {
    d(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  }
  return d;
}

CMat reflect(const CMat& s) {
  const int dim = even_dim_of(s, "reflect");
  const CMat d = hwp_matrix(dim / 2);
  return d * s.transpose() * d;
}

CMat reflect(const ChannelSegment& seg) { return reflect(seg.forward); }

CMat forward_matrix(const PerturbationSequence& seq) {
  const int dim = seq.dim();
  CMat m = CMat::Identity(dim, dim);
  for (const auto& seg : seq.segments) {
    if (seg.forward.rows() != dim) {
      throw std::invalid_argument("forward_matrix: segment dimension mismatch");
    }
    m = m * seg.forward;
  }
  return m;
}

CMat backward_matrix(const PerturbationSequence& seq) {
  const int dim = seq.dim();
  CMat r = CMat::Identity(dim, dim);
  for (const auto& seg : seq.segments) {
    if (seg.forward.rows() != dim) {
      throw std::invalid_argument("backward_matrix: segment dimension mismatch");
    }
    r = reflect(seg) * r;  // R_q ... R_1
  }
  return r;
}

CMat round_trip_matrix(const PerturbationSequence& seq) {
  CMat conj_forward = CMat::Identity(seq.dim(), seq.dim());
  for (const auto& seg : seq.segments) {
    conj_forward = conj_forward * seg.forward.conjugate();
  }
  return backward_matrix(seq) * hwp_matrix(seq.n_cores) * conj_forward;
}

CVec propagate(const CVec& amplitudes, const CMat& m) {
  if (m.cols() != amplitudes.size()) {
    throw std::invalid_argument("propagate: dimension mismatch");
  }
  return m * amplitudes;
}

ModalDelays ModalDelays::uniform_spacing(int dim, double spacing) {
  ModalDelays d;
  d.tau.resize(dim);
  for (int k = 0; k < dim; ++k) d.tau[k] = spacing * k;
  return d;
}

ChannelSegment random_symmetric_segment(int n_cores, double kappa_scale,
                                        std::mt19937_64& rng, double z) {
  const CMat c = linalg::random_symmetric_coupling(2 * n_cores, kappa_scale,
                                                   kappa_scale, rng);
  return ChannelSegment(linalg::mat_exp(c, z), SegmentKind::SymmetricCoupling, z);
}

ChannelSegment haar_segment(int n_cores, std::mt19937_64& rng) {
  return ChannelSegment(linalg::haar_unitary(2 * n_cores, rng),
                        SegmentKind::GeneralSU2N);
}

PerturbationSequence random_sequence(int n_cores, int q, SegmentKind kind,
                                     double kappa_scale, std::mt19937_64& rng) {
  PerturbationSequence seq;
  seq.n_cores = n_cores;
  seq.segments.reserve(q);
  for (int k = 0; k < q; ++k) {
    if (kind == SegmentKind::SymmetricCoupling) {
      seq.segments.push_back(random_symmetric_segment(n_cores, kappa_scale, rng));
    } else {
      seq.segments.push_back(haar_segment(n_cores, rng));
    }
  }
  return seq;
}

}  // namespace opcqkd::channel
