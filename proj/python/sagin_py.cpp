#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "sagin/config.hpp"
#include "sagin/env.hpp"
#include "sagin/power_alloc.hpp"
#include "sagin/protocol.hpp"

namespace py = pybind11;

namespace {

// Round-trips through the wire encoding so Python sees the same dicts a
// remote client would.
py::object to_py(const nlohmann::json& j) {
    py::object loads = py::module_::import("json").attr("loads");
    return loads(j.dump());
}

nlohmann::json from_py(const py::object& o) {
    py::object dumps = py::module_::import("json").attr("dumps");
    return nlohmann::json::parse(dumps(o).cast<std::string>());
}

sagin::PowerAllocProblem make_problem(std::vector<double> gains, std::vector<double> bandwidth,
                                      double p_min, double p_max, double p_total) {
    sagin::PowerAllocProblem p{std::move(gains), std::move(bandwidth), p_min, p_max, p_total};
    sagin::validate(p);
    return p;
}

py::dict allocation_dict(const sagin::PowerAllocation& a) {
    py::dict d;
    d["powers"] = a.powers;
    d["rates"] = a.rates;
    d["min_rate"] = a.min_rate;
    return d;
}

sagin::SimConfig sim_from(const py::object& config) {
    if (config.is_none()) return sagin::SimConfig{};
    return sagin::parse_run_config(from_py(config)).sim;
}

}  // namespace

PYBIND11_MODULE(_sagin, m) {
    m.doc() = "Bindings for the HAP-relayed LEO downlink simulator";

    m.def("orbital_period", [](double radius) { return sagin::orbital_period(radius); }, py::arg("radius"));

    m.def(
        "satellite_position",
        [](double inclination, double raan, double arg_perigee, double altitude, double true_anomaly,
           std::int64_t t, double slot_duration) {
            sagin::OrbitalElements e{inclination, raan, arg_perigee, altitude, true_anomaly};
            const auto p = sagin::satellite_position(e, t, slot_duration);
            return py::make_tuple(p.x, p.y, p.z);
        },
        py::arg("inclination"), py::arg("raan"), py::arg("arg_perigee"), py::arg("altitude"),
        py::arg("true_anomaly"), py::arg("t"), py::arg("slot_duration") = 1.0);

    m.def(
        "solve_max_min",
        [](std::vector<double> gains, std::vector<double> bandwidth, double p_min, double p_max, double p_total,
           double tolerance) {
            return allocation_dict(sagin::solve_max_min(
                make_problem(std::move(gains), std::move(bandwidth), p_min, p_max, p_total), tolerance));
        },
        py::arg("effective_gain"), py::arg("bandwidth"), py::arg("p_min"), py::arg("p_max"), py::arg("p_total"),
        py::arg("rate_tolerance") = 0.0);

    m.def(
        "brute_force_oracle",
        [](std::vector<double> gains, std::vector<double> bandwidth, double p_min, double p_max, double p_total,
           int grid_points) {
            return allocation_dict(sagin::brute_force_oracle(
                make_problem(std::move(gains), std::move(bandwidth), p_min, p_max, p_total), grid_points));
        },
        py::arg("effective_gain"), py::arg("bandwidth"), py::arg("p_min"), py::arg("p_max"), py::arg("p_total"),
        py::arg("grid_points_per_dim"));

    m.def("default_config", [] { return to_py(sagin::to_json(sagin::RunConfig{})); });

    py::class_<sagin::Environment>(m, "Env")
        .def(py::init([](const py::object& config) { return sagin::Environment(sim_from(config)); }),
             py::arg("config") = py::none())
        .def("schema", [](const sagin::Environment& e) { return to_py(sagin::protocol::schema_json(e.config())); })
        .def(
            "reset",
            [](sagin::Environment& e, std::optional<std::uint64_t> seed) {
                return to_py(sagin::protocol::state_json(e.reset(seed)));
            },
            py::arg("seed") = py::none())
        .def("step", [](sagin::Environment& e, int action) { return to_py(sagin::protocol::outcome_json(e.step(action))); },
             py::arg("action"))
        .def("visible", &sagin::Environment::visible_now)
        .def_property_readonly("t", &sagin::Environment::t)
        .def_property_readonly("done", &sagin::Environment::done)
        .def_property_readonly("num_satellites", [](const sagin::Environment& e) { return e.config().num_satellites; })
        .def_property_readonly("num_users", [](const sagin::Environment& e) { return e.config().num_users; })
        .def("objectives", [](const sagin::Environment& e) {
            const auto r = sagin::objective_report(e);
            return py::make_tuple(r.f1, r.f2);
        });
}
