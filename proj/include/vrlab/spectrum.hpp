// spectrum.hpp - bound states of the frozen effective Hamiltonian H0 - x H1
//
// For the w-model the continuum occupies [-h, h]; eigenvalues below -h are
// bound states. The rotor spectrum is discrete at any truncation, so every
// level counts as bound there.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vrlab/operators.hpp"

namespace vrlab {

/// Default distance below the band edge an eigenvalue must reach to count as
/// bound. It only absorbs rounding: at x = 0 the lowest band level sits on the
/// edge exactly.
inline constexpr double kDefaultGuardBand = 1e-9;

struct BoundState {
  double energy = 0.0;
  int parity = 1;   // sign of <psi|P|psi>
  int index = 0;    // n, counted from the lowest bound state
  double parity_expectation = 1.0;
  bool parity_ambiguous = false;  // |<P>| < 0.99
};

struct SpectrumReport {
  double x = 0.0;
  std::vector<double> eigenvalues;  // ascending
  std::vector<BoundState> bound_states;
  double continuum_edge = 0.0;  // +inf when the spectrum is fully discrete
  int n_b_total = 0;
  int n_b_even = 0;
  bool any_parity_ambiguous = false;

  std::vector<double> even_energies() const;
};

enum class Regime { Thermal, ViolentRelaxationCandidate, PersistentOscillations };

struct RegimeClassification {
  Regime label = Regime::Thermal;
  int n_b_accessible = 0;
};

struct CriticalPoint {
  double x_c = 0.0;
  int parity = 1;
};

std::string to_string(Regime r);

/// Full symmetric eigen-decomposition of H0 - x H1 (first coupling operator).
SpectrumReport diagonalize(const ModelSpec& spec, double x, double guard_band = kDefaultGuardBand);

/// Bound-state counts only (cheaper; used by the critical-x scan).
struct BoundCounts {
  int even = 0;
  int odd = 0;
};
BoundCounts count_bound_states(const ModelSpec& spec, double x, double guard_band = kDefaultGuardBand);

/// x values where the per-parity bound-state count increments, bisected
/// between grid neighbours to `resolution`.
std::vector<CriticalPoint> scan_critical_x(const ModelSpec& spec, const std::vector<double>& x_grid,
                                           double guard_band = kDefaultGuardBand,
                                           double resolution = 1e-3);

RegimeClassification classify_regime(const ModelSpec& spec, double x, bool parity_restricted,
                                     double guard_band = kDefaultGuardBand);
RegimeClassification classify_count(int n_b_accessible);

/// Sorted distinct differences E_k - E_k' over all bound-state pairs.
std::vector<double> superoperator_frequencies(const SpectrumReport& report);

/// One row per x: "x,n_b_total,n_b_even,E_0,E_1,..." padded with empty fields.
void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumReport>& reports);
/// JSON list of {"w", "x_c", "parity"}.
void write_critical_json(std::ostream& out, int w, const std::vector<CriticalPoint>& points);

}  // namespace vrlab
