#pragma once

#include <Eigen/Dense>

#include "nrc/circuit.hpp"
#include "nrc/rng.hpp"

namespace nrc {

/// Haar-random unitary on the given dimension: complex Ginibre matrix,
/// Householder QR, then column phases fixed by the sign of the triangular
/// factor's diagonal (plain QR alone is not Haar).
Eigen::MatrixXcd sample_haar_unitary(int dim, Rng& rng);

/// Haar-random two-qubit gate.
Eigen::Matrix4cd sample_haar_two_qubit(Rng& rng);

/// Haar-random pure state of dimension dim (normalized Ginibre vector),
/// equal in law to a column of a Haar unitary.
Eigen::VectorXcd sample_haar_state(int dim, Rng& rng);

/// max-norm of U^dag U - I.
double unitarity_defect(const Eigen::MatrixXcd& u);

/// Fills every pair of the architecture with an independent Haar gate.
CircuitRealization sample_haar_circuit(const ArchitectureSpec& arch,
                                       CircuitNoise noise, Rng rng);

}  // namespace nrc
