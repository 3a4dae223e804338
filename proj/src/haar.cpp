#include "nrc/haar.hpp"

#include <complex>

#include "nrc/errors.hpp"

namespace nrc {

namespace {

Eigen::MatrixXcd ginibre(int rows, int cols, Rng& rng) {
  Eigen::MatrixXcd g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      g(i, j) = std::complex<double>(rng.normal(), rng.normal());
    }
  }
  return g;
}

}  // namespace

Eigen::MatrixXcd sample_haar_unitary(int dim, Rng& rng) {
  if (dim < 1) throw ValidationError("unitary dimension must be positive");
  const Eigen::MatrixXcd g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd u = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const std::complex<double> diag = r(j, j);
    u.col(j) *= diag / std::abs(diag);
  }
  return u;
}

Eigen::Matrix4cd sample_haar_two_qubit(Rng& rng) {
  return sample_haar_unitary(4, rng);
}

Eigen::VectorXcd sample_haar_state(int dim, Rng& rng) {
  Eigen::VectorXcd v = ginibre(dim, 1, rng);
  v /= v.norm();
  return v;
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd defect =
      u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return defect.cwiseAbs().maxCoeff();
}

CircuitRealization sample_haar_circuit(const ArchitectureSpec& arch,
                                       CircuitNoise noise, Rng rng) {
  CircuitRealization circuit;
  circuit.architecture = arch;
  circuit.noise = std::move(noise);
  circuit.layers.resize(arch.d);
  std::uint64_t gate_index = 0;
  for (int m = 0; m < arch.d; ++m) {
    circuit.layers[m].reserve(arch.layers[m].size());
    for (const auto& [a, b] : arch.layers[m]) {
      Rng gate_rng = rng.derive(gate_index++);
      Gate2Q gate;
      gate.a = a;
      gate.b = b;
      gate.u = sample_haar_two_qubit(gate_rng);
      circuit.layers[m].push_back(std::move(gate));
    }
  }
  return circuit;
}

}  // namespace nrc
