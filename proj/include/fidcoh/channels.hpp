#pragma once

#include <span>
#include <string>
#include <vector>

#include "fidcoh/core.hpp"
#include "fidcoh/rng.hpp"

namespace fidcoh {

inline constexpr double kDefaultProbFloor = 1e-12;

struct ChannelViolation {
  enum class Kind { Dimension, Completeness, Incoherence };
  Kind kind;
  int op = -1;      // Kraus index, where applicable
  int column = -1;  // offending column, for incoherence
  double magnitude = 0.0;
  std::string message;
};

/// Every condition checked by validate_channel, including all failures.
struct ChannelReport {
  int dim = 0;
  int n_ops = 0;
  double completeness_residual = 0.0;  // ‖Σ K†K − I‖_max
  double incoherence_residual = 0.0;   // largest second-largest entry modulus over all columns
  std::vector<ChannelViolation> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

class ChannelValidationError : public ValidationError {
 public:
  explicit ChannelValidationError(ChannelReport report);
  const ChannelReport& report() const noexcept { return report_; }

 private:
  ChannelReport report_;
};

/// True iff every column of K has at most one entry with modulus > tol,
/// i.e. K|i⟩ is proportional to a basis state for each basis state |i⟩.
bool is_incoherent_kraus(const ComplexMatrix& k, double tol);

ChannelReport check_channel(const std::vector<ComplexMatrix>& ops, double tol = kStructuralTol);

/// Kraus representation of an incoherent CPTP map.
class IncoherentChannel {
 public:
  int dim() const { return static_cast<int>(ops_.front().rows()); }
  std::size_t size() const { return ops_.size(); }
  const std::vector<ComplexMatrix>& kraus() const { return ops_; }
  const ComplexMatrix& operator[](std::size_t n) const { return ops_[n]; }

 private:
  explicit IncoherentChannel(std::vector<ComplexMatrix> ops) : ops_(std::move(ops)) {}
  friend IncoherentChannel validate_channel(std::vector<ComplexMatrix> ops, double tol);

  std::vector<ComplexMatrix> ops_;
};

/// Throws ChannelValidationError carrying the full report on any failure.
IncoherentChannel validate_channel(std::vector<ComplexMatrix> ops, double tol = kStructuralTol);

DensityMatrix apply_channel(const IncoherentChannel& channel, const DensityMatrix& rho);

struct SelectiveOutcome {
  int kraus_index;
  double probability;  // Tr(K ρ K†)
  DensityMatrix post_state;
};

struct SelectiveMeasurement {
  std::vector<SelectiveOutcome> outcomes;  // those with probability > floor
  double total_probability = 0.0;          // over all Kraus operators
  int dropped = 0;
  double dropped_probability = 0.0;
};

SelectiveMeasurement selective_outcomes(const IncoherentChannel& channel, const DensityMatrix& rho,
                                        double prob_floor = kDefaultProbFloor);

/// Random incoherent channel with n_kraus operators. Column i of K_n is
/// supported on a single row f_n(i); the stacked columns are made
/// orthonormal without leaving those supports, so completeness and column
/// structure hold by construction.
IncoherentChannel random_incoherent_channel(int dim, int n_kraus, Seed seed);
IncoherentChannel random_incoherent_channel(int dim, int n_kraus, Rng& rng);

/// U|i⟩ = e^{i phases[i]} |permutation[i]⟩
ComplexMatrix incoherent_unitary(std::span<const double> phases, std::span<const int> permutation);

}  // namespace fidcoh
