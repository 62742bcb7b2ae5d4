#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mimocc/error.hpp"
#include "mimocc/evaluator.hpp"
#include "mimocc/fixtures.hpp"
#include "mimocc/plan_io.hpp"
#include "mimocc/scheme.hpp"
#include "mimocc/verifier.hpp"

namespace py = pybind11;
using namespace mimocc;

namespace {

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict transmission_dict(const TransmissionVector& tx) {
  py::list terms;
  for (const auto& term : tx.terms) {
    py::list zf;
    for (const auto& s : term.zf_set) zf.append(py::make_tuple(s.user, s.stream));
    py::dict d;
    d["name"] = to_string(term);
    d["codeword"] = term.is_codeword();
    d["zf_set"] = zf;
    terms.append(d);
  }
  py::dict out;
  out["index"] = tx.schedule_index;
  out["serving_set"] = tx.serving_set;
  out["terms"] = terms;
  return out;
}

DofMode parse_dof_mode(const std::string& s) {
  if (s == "mimo") return DofMode::mimo;
  if (s == "virtual-miso") return DofMode::virtual_miso;
  throw Error(ErrorCode::invalid_parameter, "dof mode must be 'mimo' or 'virtual-miso'");
}

SubpacketizationBaseline parse_baseline_kind(const std::string& s) {
  if (s == "combinatorial") return SubpacketizationBaseline::combinatorial;
  if (s == "low-subpacketization") return SubpacketizationBaseline::low_subpacketization;
  throw Error(ErrorCode::invalid_parameter,
              "baseline must be 'combinatorial' or 'low-subpacketization'");
}

}  // namespace

PYBIND11_MODULE(_mimocc, m) {
  m.doc() = "Coded caching for MIMO broadcast channels: plans, verification, simulation";

  static py::exception<Error> error(m, "MimoccError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object type = error;
      py::object exc = type(e.what());
      exc.attr("code") = std::string(error_name(e.code()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def_readonly("users", &NetworkConfig::users)
      .def_readonly("caching_gain", &NetworkConfig::caching_gain)
      .def_readonly("tx_multiplexing", &NetworkConfig::tx_multiplexing)
      .def_readonly("rx_multiplexing", &NetworkConfig::rx_multiplexing)
      .def_readonly("library_size", &NetworkConfig::library_size)
      .def_readonly("tx_antennas", &NetworkConfig::tx_antennas)
      .def_readonly("rx_antennas", &NetworkConfig::rx_antennas)
      .def_property_readonly("eta", &NetworkConfig::eta)
      .def_static(
          "from_dict",
          [](const std::map<std::string, std::string>& params) { return validate_config(params); },
          py::arg("params"))
      .def("to_dict", [](const NetworkConfig& c) { return to_parameter_map(c); })
      .def("__eq__", [](const NetworkConfig& a, const NetworkConfig& b) { return a == b; })
      .def("__repr__", [](const NetworkConfig& c) {
        return "NetworkConfig(users=" + std::to_string(c.users) + ", caching_gain=" +
               std::to_string(c.caching_gain) + ", L=" + std::to_string(c.tx_multiplexing) +
               ", G=" + std::to_string(c.rx_multiplexing) + ")";
      });

  m.def(
      "make_config",
      [](int k, int t, int l, int g, int n, int sfl, int sfg) {
        return make_config(k, t, l, g, n, sfl, sfg);
      },
      py::arg("users"), py::arg("caching_gain"), py::arg("tx_multiplexing"),
      py::arg("rx_multiplexing"), py::arg("library_size") = 0, py::arg("tx_antennas") = 0,
      py::arg("rx_antennas") = 0);

  py::class_<DeliveryPlan>(m, "DeliveryPlan")
      .def_readonly("config", &DeliveryPlan::config)
      .def_readonly("demands", &DeliveryPlan::demands)
      .def_readonly("split_count", &DeliveryPlan::split_count)
      .def_readonly("stream_split", &DeliveryPlan::stream_split)
      .def_property_readonly("mode", [](const DeliveryPlan& p) { return to_string(p.mode); })
      .def("__len__", [](const DeliveryPlan& p) { return p.transmissions.size(); })
      .def("transmission",
           [](const DeliveryPlan& p, std::size_t i) { return transmission_dict(p.transmissions.at(i)); },
           py::arg("index"))
      .def("to_json", [](const DeliveryPlan& p) { return export_plan(p); })
      .def("__eq__", [](const DeliveryPlan& a, const DeliveryPlan& b) { return a == b; });

  py::class_<BaselineMisoPlan>(m, "BaselineMisoPlan")
      .def_readonly("users", &BaselineMisoPlan::users)
      .def_readonly("caching_gain", &BaselineMisoPlan::caching_gain)
      .def_readonly("multiplexing", &BaselineMisoPlan::multiplexing)
      .def_readonly("split_count", &BaselineMisoPlan::split_count)
      .def("__len__", [](const BaselineMisoPlan& b) { return b.transmissions.size(); });

  m.def("build_unicast_plan", &build_unicast_plan, py::arg("config"),
        py::arg("demands") = std::vector<int>{});
  m.def("build_multicast_plan", &build_multicast_plan, py::arg("config"),
        py::arg("demands") = std::vector<int>{});
  m.def("import_plan", [](const std::string& text) { return import_plan(text); }, py::arg("text"));
  m.def("export_plan", &export_plan, py::arg("plan"));
  m.def("import_baseline", [](const std::string& text) { return import_baseline(text); },
        py::arg("text"));
  m.def(
      "elevate_baseline",
      [](const BaselineMisoPlan& b, int g, std::vector<int> demands) {
        return elevate_baseline(b, g, std::move(demands));
      },
      py::arg("baseline"), py::arg("rx_multiplexing"), py::arg("demands") = std::vector<int>{});
  m.def("k6_fixture_documents", [] {
    const auto d = k6_fixture_documents();
    py::dict out;
    out["baseline"] = d.baseline;
    out["plan"] = d.plan;
    out["placement"] = d.placement;
    return out;
  });

  m.def(
      "verify_plan",
      [](const DeliveryPlan& plan) { return json_to_py(report_to_json(verify_plan(plan), plan)); },
      py::arg("plan"), "Decodability report as a dict with a 'verdict' of 'pass' or 'fail'.");

  m.def("binomial", &binomial, py::arg("n"), py::arg("r"));
  m.def(
      "count_dof",
      [](const NetworkConfig& c, const std::string& mode) { return count_dof(c, parse_dof_mode(mode)); },
      py::arg("config"), py::arg("mode") = "mimo");
  m.def(
      "count_subpacketization",
      [](const NetworkConfig& c, const std::string& kind) {
        return count_subpacketization(c, parse_baseline_kind(kind));
      },
      py::arg("config"), py::arg("baseline") = "combinatorial");
  m.def("plan_subpacketization", &plan_subpacketization, py::arg("plan"));

  py::class_<RateReport>(m, "RateReport")
      .def_readonly("trials", &RateReport::trials)
      .def_property_readonly("points",
                             [](const RateReport& r) {
                               py::list out;
                               for (const auto& p : r.points) {
                                 py::dict d;
                                 d["snr_db"] = p.snr_db;
                                 d["mode"] = to_string(p.mode);
                                 d["strategy"] = to_string(p.strategy);
                                 d["mean_rate_nats"] = p.mean_rate;
                                 d["stderr"] = p.standard_error;
                                 d["raw"] = p.raw;
                                 out.append(d);
                               }
                               return out;
                             })
      .def("to_csv", [](const RateReport& r) { return report_csv(r); });

  m.def(
      "run_sweep",
      [](const NetworkConfig& config, std::vector<double> snr_db, int trials, std::uint64_t seed,
         const std::vector<std::string>& modes, const std::string& strategy, unsigned threads) {
        SimulationParams p;
        p.config = config;
        p.snr_points_db = std::move(snr_db);
        p.trials = trials;
        p.master_seed = seed;
        p.modes.clear();
        for (const auto& s : modes) p.modes.push_back(parse_sim_mode(s));
        p.strategy = parse_strategy(strategy);
        p.threads = threads;
        py::gil_scoped_release release;
        return run_sweep(p);
      },
      py::arg("config"), py::arg("snr_db"), py::arg("trials") = 10, py::arg("seed") = 1,
      py::arg("modes") = std::vector<std::string>{"mimo-unicast", "mimo-multicast", "virtual-miso"},
      py::arg("strategy") = "zf", py::arg("threads") = 0);

  m.def(
      "estimate_dof_slope",
      [](const RateReport& r, const std::string& mode, const std::string& strategy, double lo,
         double hi) { return estimate_dof_slope(r, parse_sim_mode(mode), parse_strategy(strategy), lo, hi); },
      py::arg("report"), py::arg("mode"), py::arg("strategy"), py::arg("lo_db"), py::arg("hi_db"));
}
