// Copyright 2026 The nzgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <compare>
#include <span>
#include <string>
#include <vector>

#include "nzgate/common.hpp"

namespace nzgate {

enum class Element { Q1 = 0, Coupler = 1, Q2 = 2 };

const char* to_string(Element e);

/// Full keeps the counter-rotating b_i b_j and b_i† b_j† terms of the charge
/// coupling; Rwa drops them.
enum class CouplingForm { Full, Rwa };

/// Parameters of the qubit-coupler-qubit Duffing model. Frequencies,
/// anharmonicities and couplings are ordinary frequencies in GHz.
///
/// The couplings are quoted at this object's own frequency triple; retuned()
/// rescales them with the sqrt(ω_i ω_j) law when the frequencies move.
struct SystemParams {
  double omega_q1 = 0.0;
  double omega_c = 0.0;
  double omega_q2 = 0.0;
  double eta_q1 = 0.0;
  double eta_c = 0.0;
  double eta_q2 = 0.0;
  double g_1c = 0.0;
  double g_2c = 0.0;
  double g_12 = 0.0;
  CouplingForm coupling_form = CouplingForm::Full;

  /// Reference two-qubit device (coupler parked at 10.234 GHz).
  static SystemParams paper_2q();

  /// Throws InvalidArgument unless frequencies > 0 and anharmonicities < 0.
  void validate() const;

  double omega(Element e) const;
  double eta(Element e) const;

  /// Same couplings, new frequencies.
  SystemParams with_frequencies(double w1, double wc, double w2) const;
  /// New frequencies; couplings scaled by sqrt(ω_i ω_j / ω_i,ref ω_j,ref)
  /// with this object as the reference.
  SystemParams retuned(double w1, double wc, double w2) const;
  /// Exchanges the roles of Q1 and Q2.
  SystemParams swapped_qubits() const;
};

/// Bare occupation label |Q1, CPL, Q2⟩.
struct BareLabel {
  int n_q1 = 0;
  int n_c = 0;
  int n_q2 = 0;

  constexpr int index() const { return 9 * n_q1 + 3 * n_c + n_q2; }
  static constexpr BareLabel from_index(int i) {
    return BareLabel{i / 9, (i / 3) % 3, i % 3};
  }
  /// Parses "101" style strings.
  static BareLabel parse(const std::string& s);
  std::string str() const;
  int excitations() const { return n_q1 + n_c + n_q2; }

  friend constexpr auto operator<=>(const BareLabel&, const BareLabel&) = default;
};

namespace labels {
inline constexpr BareLabel k000{0, 0, 0};
inline constexpr BareLabel k001{0, 0, 1};
inline constexpr BareLabel k100{1, 0, 0};
inline constexpr BareLabel k101{1, 0, 1};
inline constexpr BareLabel k010{0, 1, 0};
inline constexpr BareLabel k110{1, 1, 0};
inline constexpr BareLabel k011{0, 1, 1};
inline constexpr BareLabel k200{2, 0, 0};
inline constexpr BareLabel k002{0, 0, 2};
inline constexpr BareLabel k020{0, 2, 0};
/// Computational states in the order of the ideal CPhase matrix.
inline constexpr std::array<BareLabel, 4> kComputational{k000, k001, k100, k101};
}  // namespace labels

struct OperatorMatrix {
  CMatrix m;
  bool hermitian = false;

  double hermiticity_error() const;
};

/// Single-element operators embedded in the 27-dimensional space.
class OperatorTable {
 public:
  static const OperatorTable& get();

  const CMatrix& lowering(Element e) const { return lowering_[static_cast<int>(e)]; }
  /// Diagonal of b†b.
  const Eigen::VectorXd& number(Element e) const { return number_[static_cast<int>(e)]; }
  /// Diagonal of b†b†bb.
  const Eigen::VectorXd& anharmonic(Element e) const {
    return anharm_[static_cast<int>(e)];
  }
  /// Coupling operator for the pair (a, b).
  const CMatrix& coupling(Element a, Element b, CouplingForm form) const;

 private:
  OperatorTable();
  std::array<CMatrix, 3> lowering_;
  std::array<Eigen::VectorXd, 3> number_;
  std::array<Eigen::VectorXd, 3> anharm_;
  // [form][pair]: pairs ordered (Q1,C), (C,Q2), (Q1,Q2)
  std::array<std::array<CMatrix, 3>, 2> coupling_;
};

/// Instantaneous element frequencies and couplings, GHz.
struct ControlPoint {
  double omega_q1 = 0.0;
  double omega_c = 0.0;
  double omega_q2 = 0.0;
  double g_1c = 0.0;
  double g_2c = 0.0;
  double g_12 = 0.0;
};

ControlPoint control_point(const SystemParams& p);

/// H/h in GHz. Writes into `out` (resized to 27x27).
void assemble_hamiltonian(const SystemParams& p, const ControlPoint& cp, CMatrix& out);

OperatorMatrix build_hamiltonian(const SystemParams& params);

/// Dressed spectrum with bare-label bookkeeping.
struct EigenSolution {
  Eigen::VectorXd energies;  // ascending, GHz
  CMatrix vectors;           // columns are eigenvectors in the bare basis
  std::array<int, kDim> assignment{};
  std::array<double, kDim> overlap{};

  int index_of(BareLabel l) const { return assignment[l.index()]; }
  double energy(BareLabel l) const { return energies(index_of(l)); }
  CVector state(BareLabel l) const { return vectors.col(index_of(l)); }
};

/// Diagonalizes H and assigns every bare label to the eigenvector of largest
/// overlap (ties go to the lower energy). Throws AmbiguousLabel when a label
/// in `required` falls below `threshold` or shares its eigenvector with
/// another label.
EigenSolution diagonalize_and_label(const OperatorMatrix& H, double threshold = 0.5,
                                    std::span<const BareLabel> required = {});

/// Indices of the two eigenvectors with the largest weight on span{a, b},
/// ordered by energy.
std::array<int, 2> dominant_pair(const EigenSolution& sol, BareLabel a, BareLabel b);

/// ζ = E(101) + E(000) − E(100) − E(001), GHz. The single-excitation pair
/// enters as the sum of the two qubit-like eigenvalues, which keeps ζ defined
/// when the two qubits hybridize with each other.
double zz_exact(const SystemParams& params);

/// Signed exchange coupling between bare states a and b read off the
/// Löwdin-orthonormalized effective Hamiltonian of their dressed pair.
double exact_exchange_coupling(const SystemParams& params, BareLabel a, BareLabel b);

/// Effective XY coupling J between |100⟩ and |001⟩.
double exact_xy_coupling(const SystemParams& params);

/// |⟨bare|dressed(label)⟩|², the weight of `bare` in the dressed state
/// labeled `dressed`.
double dressed_overlap(const SystemParams& params, BareLabel bare, BareLabel dressed);

struct GapResult {
  double gtilde = 0.0;          // half the minimum splitting, GHz
  double min_splitting = 0.0;   // GHz
  double resonance = 0.0;       // tuned frequency at the minimum, GHz
};

/// Sweeps the frequency of `tuning` over [lo, hi] and returns half of the
/// minimum dressed splitting of the pair built on labels a and b. Throws
/// NoResonance when the minimum sits on the bracket edge.
GapResult anticrossing_gap(const SystemParams& params, BareLabel a, BareLabel b,
                           Element tuning, double lo, double hi, int grid = 41);

/// Splitting of the {a, b} dominant pair with `tuning` set to x.
double pair_splitting(const SystemParams& params, BareLabel a, BareLabel b,
                      Element tuning, double x);

}  // namespace nzgate
