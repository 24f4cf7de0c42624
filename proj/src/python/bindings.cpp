#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qbattery/ed_oracle.hpp"
#include "qbattery/energetics.hpp"
#include "qbattery/error.hpp"
#include "qbattery/optimizer.hpp"
#include "qbattery/scaling.hpp"

namespace py = pybind11;
using namespace qbattery;

namespace {

Beta to_beta(const py::object& b) {
    if (py::isinstance<py::str>(b)) return Beta::parse(b.cast<std::string>());
    const double v = b.cast<double>();
    if (std::isinf(v) && v > 0) return Beta::infinite();
    return Beta::finite(v);
}

ModelPair pair_of(const std::string& model, int N, int n, double phi_b, double phi_c) {
    return make_pair(parse_model_kind(model), N, n, {phi_b, phi_c, Beta::infinite()});
}

py::dict summary_dict(const PowerSummary& s) {
    py::dict d;
    d["tau_max"] = s.tau_max;
    d["p_max"] = s.p_max;
    d["e_max"] = s.e_at_tau_max;
    d["window"] = py::make_tuple(s.search_window.lo, s.search_window.hi);
    d["grid_points"] = s.grid_points;
    d["boundary_hit"] = s.boundary_hit;
    return d;
}

}  // namespace

PYBIND11_MODULE(_qbattery, m) {
    m.doc() = "Charging energetics of cluster-Ising quantum batteries.";

    py::register_exception<Error>(m, "QBatteryError", PyExc_ValueError);

    m.def("coefficients", [](const std::string& model, int N, int n, double phi) {
        const auto k = coefficients({parse_model_kind(model), N, n, phi});
        return py::make_tuple(k.a, k.c);
    }, py::arg("model"), py::arg("N"), py::arg("n"), py::arg("phi"));

    m.def("stored_energy",
          [](const std::string& model, int N, int n, double phi_b, double phi_c, py::object beta,
             double tau) {
              return stored_energy(pair_of(model, N, n, phi_b, phi_c), to_beta(beta), tau);
          },
          py::arg("model"), py::arg("N"), py::arg("n"), py::arg("phi_b"), py::arg("phi_c"),
          py::arg("beta"), py::arg("tau"));

    m.def("energy_curve",
          [](const std::string& model, int N, int n, double phi_b, double phi_c, py::object beta,
             std::vector<double> taus) {
              const auto c = energy_curve(pair_of(model, N, n, phi_b, phi_c), to_beta(beta), taus);
              return py::make_tuple(c.energy, c.power);
          },
          py::arg("model"), py::arg("N"), py::arg("n"), py::arg("phi_b"), py::arg("phi_c"),
          py::arg("beta"), py::arg("taus"));

    m.def("maximize_power",
          [](const std::string& model, int N, int n, double phi_b, double phi_c, py::object beta,
             int grid_points) {
              return summary_dict(
                  maximize_power(pair_of(model, N, n, phi_b, phi_c), to_beta(beta), grid_points));
          },
          py::arg("model"), py::arg("N"), py::arg("n"), py::arg("phi_b"), py::arg("phi_c"),
          py::arg("beta"), py::arg("grid_points") = kDefaultGridPoints);

    m.def("sweep",
          [](const std::string& model, std::vector<int> sizes, double phi_b, double phi_c,
             py::object beta, const std::string& rule, int n_fixed, int jobs) {
              const Beta b = to_beta(beta);
              const auto rows = sweep(parse_model_kind(model), {phi_b, phi_c, b},
                                      ClusterRule{parse_rule_kind(rule), n_fixed}, sizes,
                                      SweepOptions{kDefaultGridPoints, std::nullopt, jobs});
              py::list out;
              for (const auto& r : rows) {
                  py::dict d = r.ok() ? summary_dict(r.summary) : py::dict();
                  d["N"] = r.N;
                  d["n"] = r.n;
                  if (!r.ok()) d["error"] = *r.error;
                  out.append(d);
              }
              return out;
          },
          py::arg("model"), py::arg("sizes"), py::arg("phi_b"), py::arg("phi_c"),
          py::arg("beta") = "inf", py::arg("rule") = "fixed", py::arg("n_fixed") = 15,
          py::arg("jobs") = 1);

    m.def("fit_power_law", [](std::vector<int> sizes, std::vector<double> p_max) {
        if (sizes.size() != p_max.size()) throw Error(ErrorKind::Domain, "length mismatch");
        std::vector<FitPoint> pts;
        for (std::size_t i = 0; i < sizes.size(); ++i) pts.push_back({sizes[i], p_max[i]});
        const auto f = fit_power_law(pts);
        py::dict d;
        d["a"] = f.a;
        d["alpha"] = f.alpha;
        d["r_squared"] = f.r_squared;
        d["residuals"] = f.residuals;
        return d;
    }, py::arg("sizes"), py::arg("p_max"));

    m.def("oracle_energy",
          [](const std::string& model, int N, int n, double phi_b, double phi_c, py::object beta,
             double tau, const std::string& ensemble) {
              const auto kind = parse_model_kind(model);
              return ed::oracle_energy({kind, N, n, phi_b}, {kind, N, n, phi_c}, to_beta(beta), tau,
                                       ed::parse_ensemble(ensemble));
          },
          py::arg("model"), py::arg("N"), py::arg("n"), py::arg("phi_b"), py::arg("phi_c"),
          py::arg("beta"), py::arg("tau"), py::arg("ensemble") = "fock");
}
