#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nrc/architecture.hpp"
#include "nrc/bounds.hpp"
#include "nrc/clifford.hpp"
#include "nrc/dense.hpp"
#include "nrc/haar.hpp"
#include "nrc/harness.hpp"
#include "nrc/statmech.hpp"

namespace py = pybind11;
using namespace nrc;

namespace {

OutputDistribution to_distribution(const std::vector<double>& p) {
  OutputDistribution dist;
  dist.n = 0;
  while ((std::size_t{1} << dist.n) < p.size()) ++dist.n;
  if (p.size() != (std::size_t{1} << dist.n)) {
    throw ValidationError("distribution length must be a power of two");
  }
  dist.p = p;
  return dist;
}

CircuitNoise make_noise(const py::object& channel, double p, double q,
                        const ArchitectureSpec& arch, Rng rng) {
  if (!channel.is_none()) {
    return CircuitNoise::pauli(channel.cast<PauliChannel>());
  }
  if (p > 0.0) {
    return CircuitNoise::heralded_dephasing(
        q, sample_noise_locations(arch, HeraldedDephasingSpec(p, q), rng));
  }
  return CircuitNoise::none_noise();
}

py::dict record_to_dict(const ResultRecord& rec) {
  py::dict d;
  d["experiment"] = rec.experiment;
  d["n"] = rec.n;
  d["d"] = rec.d;
  d["layout"] = rec.layout;
  auto put = [&](const char* key, double v) {
    if (!std::isnan(v)) d[key] = v;
  };
  put("qx", rec.qx);
  put("qy", rec.qy);
  put("qz", rec.qz);
  put("p", rec.p);
  put("q", rec.q);
  put("alpha", rec.alpha);
  d["estimator"] = rec.estimator;
  d["value"] = rec.value;
  d["stderr"] = rec.stderror;
  d["samples"] = rec.samples;
  d["seed"] = rec.seed;
  if (!rec.bound_name.empty()) {
    d["bound_name"] = rec.bound_name;
    put("bound_value", rec.bound_value);
  }
  if (!rec.verdict.empty()) d["verdict"] = rec.verdict;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Simulation engines and closed-form bounds for the convergence "
            "of noisy random circuits to the uniform distribution.";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);

  py::class_<PauliChannel>(m, "PauliChannel")
      .def(py::init<double, double, double>(), py::arg("qx"), py::arg("qy"),
           py::arg("qz"))
      .def_readonly("qx", &PauliChannel::qx)
      .def_readonly("qy", &PauliChannel::qy)
      .def_readonly("qz", &PauliChannel::qz)
      .def_property_readonly("q", &PauliChannel::total)
      .def_property_readonly("b", &PauliChannel::bias_b)
      .def_static("dephasing", &PauliChannel::dephasing)
      .def_static("depolarizing", &PauliChannel::depolarizing);

  py::class_<HeraldedDephasingSpec>(m, "HeraldedDephasingSpec")
      .def(py::init<double, double>(), py::arg("p"), py::arg("q"))
      .def_readonly("p", &HeraldedDephasingSpec::p)
      .def_readonly("q", &HeraldedDephasingSpec::q)
      .def_property_readonly("gamma", &HeraldedDephasingSpec::gamma)
      .def_property_readonly("beta", &HeraldedDephasingSpec::beta)
      .def_property_readonly("alpha", &HeraldedDephasingSpec::alpha);

  py::class_<NoiseLocationSet>(m, "NoiseLocationSet")
      .def_readonly("n", &NoiseLocationSet::n)
      .def_readonly("d", &NoiseLocationSet::d)
      .def_readonly("sites_per_layer", &NoiseLocationSet::sites_per_layer)
      .def("total_locations", &NoiseLocationSet::total_locations)
      .def("per_site_counts", &NoiseLocationSet::per_site_counts);

  py::class_<ArchitectureSpec>(m, "Architecture")
      .def_readonly("n", &ArchitectureSpec::n)
      .def_readonly("d", &ArchitectureSpec::d)
      .def_readonly("layers", &ArchitectureSpec::layers)
      .def_property_readonly(
          "layout",
          [](const ArchitectureSpec& a) { return to_string(a.layout); })
      .def("serialize",
           [](const ArchitectureSpec& a) { return serialize_architecture(a); })
      .def("forward_lightcone",
           [](const ArchitectureSpec& a, int site, int k) {
             return forward_lightcone(a, site, k);
           })
      .def("backward_lightcone",
           [](const ArchitectureSpec& a, int site, int k) {
             return backward_lightcone(a, site, k);
           });

  m.def(
      "build_architecture",
      [](int n, int d, const std::string& layout, std::uint64_t seed) {
        return build_architecture(n, d, layout_from_string(layout), seed);
      },
      py::arg("n"), py::arg("d"), py::arg("layout") = "brickwork1d",
      py::arg("seed") = 0);
  m.def("parse_architecture", [](const std::string& text) {
    const auto parsed = parse_architecture(text);
    return py::make_tuple(parsed.arch, parsed.noise);
  });
  m.def(
      "sample_noise_locations",
      [](const ArchitectureSpec& arch, double p, double q,
         std::uint64_t seed) {
        return sample_noise_locations(arch, HeraldedDephasingSpec(p, q),
                                      Rng(seed));
      },
      py::arg("arch"), py::arg("p"), py::arg("q"), py::arg("seed"));
  m.def("serialize_architecture",
        [](const ArchitectureSpec& arch, const NoiseLocationSet& noise) {
          return serialize_architecture(arch, &noise);
        });

  m.def(
      "sample_haar_unitary",
      [](int dim, std::uint64_t seed) {
        Rng rng(seed);
        return sample_haar_unitary(dim, rng);
      },
      py::arg("dim"), py::arg("seed"));
  m.def(
      "sample_haar_two_qubit",
      [](std::uint64_t seed) {
        Rng rng(seed);
        return Eigen::MatrixXcd(sample_haar_two_qubit(rng));
      },
      py::arg("seed"));

  m.def(
      "noisy_haar_output",
      [](const ArchitectureSpec& arch, const py::object& channel, double p,
         double q, std::uint64_t seed) {
        Rng rng(seed);
        const CircuitNoise noise = make_noise(channel, p, q, arch,
                                              rng.derive(1));
        const auto circuit = sample_haar_circuit(arch, noise, rng.derive(0));
        DenseLimits limits;
        return output_distribution(simulate_noisy_circuit(circuit, limits)).p;
      },
      py::arg("arch"), py::arg("channel") = py::none(), py::arg("p") = 0.0,
      py::arg("q") = 0.0, py::arg("seed") = 0,
      "Sample a Haar circuit on the architecture, apply the noise model, "
      "and return the exact output distribution.");
  m.def(
      "noisy_clifford_output",
      [](const ArchitectureSpec& arch, const py::object& channel, double p,
         double q, std::uint64_t seed) {
        Rng rng(seed);
        const CircuitNoise noise = make_noise(channel, p, q, arch,
                                              rng.derive(1));
        const auto circuit =
            sample_clifford_circuit(arch, noise, rng.derive(0));
        const auto result = noisy_clifford_distribution(circuit);
        return py::make_tuple(result.distribution.p, result.collision,
                              result.collision_noiseless);
      },
      py::arg("arch"), py::arg("channel") = py::none(), py::arg("p") = 0.0,
      py::arg("q") = 0.0, py::arg("seed") = 0,
      "Sample a uniform two-qubit-Clifford circuit, fold the noise past the "
      "gates exactly, and return (distribution, Z_noisy, Z_noiseless).");

  m.def("tvd_to_uniform", [](const std::vector<double>& p) {
    return tvd_to_uniform(to_distribution(p));
  });
  m.def("collision_probability", [](const std::vector<double>& p) {
    return collision_probability(to_distribution(p));
  });
  m.def("marginal_zero_probability",
        [](const std::vector<double>& p, int site) {
          return marginal_zero_probability(to_distribution(p), site);
        });
  m.def("single_qubit_channel_power", &single_qubit_channel_power,
        py::arg("channel"), py::arg("d"));

  m.def("clifford_group_size",
        []() { return CliffordGroup::instance().size(); });
  m.def("z1_fixing_count",
        []() { return CliffordGroup::instance().z1_fixing_count(); });
  m.def("z1_fixing_fraction", []() {
    const auto& group = CliffordGroup::instance();
    return double(group.z1_fixing_count()) / double(group.size());
  });

  m.def(
      "exact_average_collision",
      [](const ArchitectureSpec& arch, double p, double q,
         bool include_final_layer_noise, bool leading_single_qubit_layer) {
        StatmechOptions opts;
        opts.include_final_layer_noise = include_final_layer_noise;
        opts.leading_single_qubit_layer = leading_single_qubit_layer;
        return exact_average_collision_heralded(arch, p, q, opts);
      },
      py::arg("arch"), py::arg("p"), py::arg("q"),
      py::arg("include_final_layer_noise") = true,
      py::arg("leading_single_qubit_layer") = true,
      "Exact gate-averaged collision probability with Bernoulli(p) heralded "
      "dephasing. Drop the final noise layer to match a circuit measured "
      "immediately after its last gate layer.");
  m.def("modified_ensemble_collision", &modified_ensemble_collision,
        py::arg("n"), py::arg("t"), py::arg("q"));
  m.def("location_averaged_collision", &location_averaged_collision,
        py::arg("n"), py::arg("d"), py::arg("p"), py::arg("q"));
  m.def("collision_upper_bound", &collision_upper_bound, py::arg("n"),
        py::arg("d"), py::arg("p"), py::arg("q"));
  m.def("composite_channel_state", &composite_channel_state, py::arg("q"),
        py::arg("k"));

  m.def("tvd_lower_bound", &bounds::tvd_lower_bound, py::arg("channel"),
        py::arg("d"));
  m.def("tvd_lower_bound_from_b", &bounds::tvd_lower_bound_from_b,
        py::arg("b"), py::arg("d"));
  m.def("tvd_upper_bound", &bounds::tvd_upper_bound, py::arg("n"),
        py::arg("d"), py::arg("p"), py::arg("q"));
  m.def(
      "typicality_tail",
      [](long n, int d, const PauliChannel& channel) {
        const auto tail = bounds::typicality_tail(n, d, channel);
        py::dict out;
        out["value"] = tail.value;
        out["threshold"] = tail.threshold;
        out["depth_window"] = tail.depth_window;
        out["saturated"] = tail.saturated;
        if (!tail.note.empty()) out["note"] = tail.note;
        return out;
      },
      py::arg("n"), py::arg("d"), py::arg("channel"));
  m.def("anticoncentration_threshold", &bounds::anticoncentration_threshold,
        py::arg("n"), py::arg("d"));
  m.def("anticoncentration_threshold_noisy",
        &bounds::anticoncentration_threshold_noisy, py::arg("n"), py::arg("d"),
        py::arg("b"));
  m.def(
      "reference_constants",
      [](int n) {
        const auto ref = bounds::reference_constants(n);
        py::dict out;
        out["haar_collision"] = ref.haar_collision;
        out["porter_thomas_tvd_floor"] = ref.porter_thomas_tvd_floor;
        out["mu_upper"] = ref.mu_upper;
        return out;
      },
      py::arg("n"));
  m.def("mu_lower", &bounds::mu_lower, py::arg("d"), py::arg("b"));

  m.def(
      "run_experiment",
      [](const std::string& config_text) {
        const auto config = ExperimentConfig::from_text(config_text);
        config.validate();
        const auto records = run_experiment(config);
        py::list out;
        for (const auto& rec : records) out.append(record_to_dict(rec));
        return out;
      },
      py::arg("config_text"),
      "Run one experiment from flat key=value config text and return the "
      "result records as dictionaries.");

  m.attr("__version__") = "0.1.0";
}
