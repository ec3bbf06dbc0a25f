#pragma once

// Seeded synthetic loss streams.
//
// Every stream draws from a single Rng (see random.hpp) in the order stated
// next to each kind, so a (kind, d, T, seed) tuple determines the stream.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "scomd/error.hpp"
#include "scomd/ops.hpp"
#include "scomd/quantum.hpp"
#include "scomd/random.hpp"

namespace scomd::bench {

enum class MarketKind {
  iid_uniform,            // a_t(i) = uniform(), rounds in order, coordinates in order
  kelly_two_asset,        // odd t: (1, 1/2, 1/4, ...), even t: (1/2, 1, 1/4, ...); no draws
  adversarial_alternating,  // a_t = e_{(t-1) mod d}; no draws
  dominant_asset,         // a_t(1) = 1, a_t(i>1) = uniform() / 2
};

inline std::optional<MarketKind> parse_market_kind(std::string_view s) {
  if (s == "iid-uniform") return MarketKind::iid_uniform;
  if (s == "kelly-two-asset") return MarketKind::kelly_two_asset;
  if (s == "adversarial-alternating") return MarketKind::adversarial_alternating;
  if (s == "dominant-asset") return MarketKind::dominant_asset;
  return std::nullopt;
}

inline std::string to_string(MarketKind k) {
  switch (k) {
    case MarketKind::iid_uniform: return "iid-uniform";
    case MarketKind::kelly_two_asset: return "kelly-two-asset";
    case MarketKind::adversarial_alternating: return "adversarial-alternating";
    case MarketKind::dominant_asset: return "dominant-asset";
  }
  return "unknown";
}

inline std::vector<PriceRelatives> generate_market(MarketKind kind, Eigen::Index d, std::int64_t horizon,
                                                   std::uint64_t seed) {
  if (d < 2) throw DomainError("generate_market: d must be >= 2");
  if (horizon < 1) throw DomainError("generate_market: T must be >= 1");
  Rng rng(seed);
  std::vector<PriceRelatives> out;
  out.reserve(static_cast<std::size_t>(horizon));
  for (std::int64_t t = 1; t <= horizon; ++t) {
    Eigen::VectorXd a(d);
    switch (kind) {
      case MarketKind::iid_uniform:
        for (Eigen::Index i = 0; i < d; ++i) a(i) = rng.uniform();
        if (!(a.maxCoeff() > 0.0)) a.setOnes();
        break;
      case MarketKind::kelly_two_asset:
        a.setConstant(0.25);
        a(0) = t % 2 == 1 ? 1.0 : 0.5;
        a(1) = t % 2 == 1 ? 0.5 : 1.0;
        break;
      case MarketKind::adversarial_alternating:
        a.setZero();
        a((t - 1) % d) = 1.0;
        break;
      case MarketKind::dominant_asset:
        a(0) = 1.0;
        for (Eigen::Index i = 1; i < d; ++i) a(i) = 0.5 * rng.uniform();
        break;
    }
    out.emplace_back(std::move(a));
  }
  return out;
}

enum class StateKind {
  random_mixed,     // G G^* / tr(G G^*), G complex Gaussian (row-major draws)
  pure,             // normalized complex Gaussian vector
  maximally_mixed,  // I/d, no draws
  diagonal,         // diag(Dirichlet(1,...,1))
};

enum class PovmKind {
  random_basis,     // per round: Haar unitary U, effects U e_k e_k^* U^*
  computational,    // e_k e_k^*, no draws
  diagonal_random,  // per round: for each i, a Dirichlet column w(., i); M_k = diag(w(k, .))
  identity,         // {I}
};

inline std::optional<StateKind> parse_state_kind(std::string_view s) {
  if (s == "random-mixed") return StateKind::random_mixed;
  if (s == "pure") return StateKind::pure;
  if (s == "maximally-mixed") return StateKind::maximally_mixed;
  if (s == "diagonal") return StateKind::diagonal;
  return std::nullopt;
}

inline std::optional<PovmKind> parse_povm_kind(std::string_view s) {
  if (s == "random-basis") return PovmKind::random_basis;
  if (s == "computational") return PovmKind::computational;
  if (s == "diagonal-random") return PovmKind::diagonal_random;
  if (s == "identity") return PovmKind::identity;
  return std::nullopt;
}

inline std::string to_string(StateKind k) {
  switch (k) {
    case StateKind::random_mixed: return "random-mixed";
    case StateKind::pure: return "pure";
    case StateKind::maximally_mixed: return "maximally-mixed";
    case StateKind::diagonal: return "diagonal";
  }
  return "unknown";
}

inline std::string to_string(PovmKind k) {
  switch (k) {
    case PovmKind::random_basis: return "random-basis";
    case PovmKind::computational: return "computational";
    case PovmKind::diagonal_random: return "diagonal-random";
    case PovmKind::identity: return "identity";
  }
  return "unknown";
}

inline DensityMatrix make_true_state(StateKind kind, Eigen::Index d, Rng& rng) {
  switch (kind) {
    case StateKind::random_mixed: return random_density(d, rng);
    case StateKind::pure: return random_pure_state(d, rng);
    case StateKind::maximally_mixed: return DensityMatrix::maximally_mixed(d);
    case StateKind::diagonal: return DensityMatrix(HermitianMatrix::diagonal(rng.dirichlet(d)));
  }
  throw DomainError("unknown state kind");
}

inline Povm make_povm(PovmKind kind, Eigen::Index d, Rng& rng) {
  std::vector<HermitianMatrix> effects;
  switch (kind) {
    case PovmKind::random_basis: {
      const ComplexMatrix u = random_unitary(d, rng);
      for (Eigen::Index k = 0; k < d; ++k) effects.push_back(HermitianMatrix::outer(u.col(k)));
      break;
    }
    case PovmKind::computational:
      for (Eigen::Index k = 0; k < d; ++k) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
        e(k) = 1.0;
        effects.push_back(HermitianMatrix::diagonal(e));
      }
      break;
    case PovmKind::diagonal_random: {
      Eigen::MatrixXd w(d, d);
      for (Eigen::Index i = 0; i < d; ++i) w.col(i) = rng.dirichlet(d);
      for (Eigen::Index k = 0; k < d; ++k) effects.push_back(HermitianMatrix::diagonal(w.row(k).transpose()));
      break;
    }
    case PovmKind::identity:
      effects.push_back(HermitianMatrix::identity(d));
      break;
  }
  return Povm(std::move(effects));
}

struct QuantumStream {
  DensityMatrix truth;
  std::vector<Observable> observables;
  std::vector<std::size_t> outcomes;
};

/// Draws the true state, then per round the POVM (if random) followed by one
/// measurement draw.
inline QuantumStream generate_quantum_stream(Eigen::Index d, std::int64_t horizon, std::uint64_t seed,
                                             StateKind state, PovmKind povm) {
  if (d < 1) throw DomainError("generate_quantum_stream: d must be >= 1");
  if (horizon < 1) throw DomainError("generate_quantum_stream: T must be >= 1");
  Rng rng(seed);
  QuantumStream out{make_true_state(state, d, rng), {}, {}};
  out.observables.reserve(static_cast<std::size_t>(horizon));
  out.outcomes.reserve(static_cast<std::size_t>(horizon));
  const bool fixed = povm == PovmKind::computational || povm == PovmKind::identity;
  std::optional<Povm> shared;
  if (fixed) shared.emplace(make_povm(povm, d, rng));
  for (std::int64_t t = 0; t < horizon; ++t) {
    Measurement m = fixed ? sample_measurement(out.truth, *shared, rng)
                          : sample_measurement(out.truth, make_povm(povm, d, rng), rng);
    out.outcomes.push_back(m.outcome);
    out.observables.push_back(std::move(m.observable));
  }
  return out;
}

}  // namespace scomd::bench
