#pragma once

#include <string_view>

namespace choinet {

struct Tolerances {
  double herm = 1e-9;           // max |m - m^dagger| entry
  double psd = 1e-8;            // min eigenvalue accepted as zero
  double trace = 1e-9;          // |tr(rho) - 1| for normalised states
  double completeness = 1e-8;   // max entry of sum(effects) - I
  double feas = 1e-7;           // Dykstra feasibility residual
  double sep = 1e-6;            // Dykstra separation margin for infeasibility
  double wit = 1e-9;            // witness certification margin
};

/// Process-wide defaults. Set once at startup (CLI flags, CHOINET_TOL) before any
/// concurrent work; reads are then race free.
const Tolerances& default_tolerances();
void set_default_tolerances(const Tolerances& tol);

/// Parses "1e-8" (sets psd) or "psd=1e-8,herm=1e-10,feas=1e-7,sep=1e-6,wit=1e-9"
/// on top of `base`. Throws InvalidArgument on malformed input.
Tolerances parse_tolerances(std::string_view text, Tolerances base = {});

}  // namespace choinet
