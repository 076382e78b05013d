#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lgwalk/classical.hpp"
#include "lgwalk/event_log.hpp"
#include "lgwalk/experiment.hpp"

namespace py = pybind11;
using namespace lgwalk;

namespace {

py::object json_to_py(const nlohmann::ordered_json& j) {
    switch (j.type()) {
    case nlohmann::ordered_json::value_t::null: return py::none();
    case nlohmann::ordered_json::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::ordered_json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case nlohmann::ordered_json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case nlohmann::ordered_json::value_t::number_float: return py::float_(j.get<double>());
    case nlohmann::ordered_json::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::ordered_json::value_t::array: {
        py::list out;
        for (const auto& item : j)
            out.append(json_to_py(item));
        return out;
    }
    case nlohmann::ordered_json::value_t::object: {
        py::dict out;
        for (const auto& [key, value] : j.items())
            out[py::str(key)] = json_to_py(value);
        return out;
    }
    default: return py::none();
    }
}

nlohmann::json py_to_json(const py::handle& obj) {
    if (obj.is_none())
        return nullptr;
    if (py::isinstance<py::bool_>(obj))
        return obj.cast<bool>();
    if (py::isinstance<py::int_>(obj))
        return obj.cast<std::int64_t>();
    if (py::isinstance<py::float_>(obj))
        return obj.cast<double>();
    if (py::isinstance<py::str>(obj))
        return obj.cast<std::string>();
    if (py::isinstance<py::dict>(obj)) {
        nlohmann::json j = nlohmann::json::object();
        for (auto item : obj.cast<py::dict>())
            j[item.first.cast<std::string>()] = py_to_json(item.second);
        return j;
    }
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        nlohmann::json j = nlohmann::json::array();
        for (auto item : obj.cast<py::sequence>())
            j.push_back(py_to_json(item));
        return j;
    }
    throw ValidationError("config values must be scalars");
}

ProtocolConfig config_from_dict(const py::dict& d) {
    return config_from_json(py_to_json(d));
}

py::dict dist_to_dict(const PositionDistribution& dist) {
    py::dict out;
    for (int x = dist.window.x_min; x <= dist.window.x_max; ++x)
        if (dist.at(x) != 0.0)
            out[py::int_(x)] = dist.at(x);
    return out;
}

QScheme scheme_from_string(const std::string& text) { return parse_q2_scheme(text); }

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Leggett-Garg tests on one-dimensional discrete-time quantum walks";

    py::register_exception<ValidationError>(m, "ConfigError", PyExc_ValueError);

    m.def("analytic_k_constant", &analytic_k_constant, py::arg("theta"),
          "Closed-form K(theta) with the constant Q(t2) = 1 assignment.");
    m.def("analytic_k_dichotomic", &analytic_k_dichotomic, py::arg("theta"),
          "Closed-form K(theta) with the dichotomic Q(t2) (xi = -1).");
    m.def(
        "max_analytic_k_dichotomic",
        []() {
            ThetaMax mx = max_analytic_k_dichotomic();
            return py::make_tuple(mx.theta, mx.k);
        },
        "(theta, K) at the maximum of the dichotomic curve.");

    m.def("lg_k", &lg_k, py::arg("k12"), py::arg("k23"), py::arg("k13"));
    m.def("lg_k_prime", &lg_k_prime, py::arg("k12"), py::arg("k23"), py::arg("k13"));
    m.def("witness", &witness, py::arg("k"));
    m.def("venality_bound", &venality_bound, py::arg("zeta"));
    m.def("venality_decompose", &venality_decompose, py::arg("k23_ideal"), py::arg("k23_corrupt"),
          py::arg("zeta"), py::arg("k13"));
    m.def("macroscopicity", &macroscopicity, py::arg("duration_s"), py::arg("ell_m") = py::none(),
          "Macroscopicity measure; ell_m is the classicalization length in meters.");

    m.def(
        "clopper_pearson",
        [](std::int64_t successes, std::int64_t trials, double confidence) {
            return json_to_py(interval_to_json(clopper_pearson(successes, trials, confidence)));
        },
        py::arg("successes"), py::arg("trials"), py::arg("confidence") = 0.68,
        "Exact binomial confidence interval.");

    m.def(
        "walk_distribution",
        [](int steps, double theta, double dephasing) {
            WalkSpec spec{steps, CoinParams(theta), dephasing};
            WalkTrace trace = run_walk(spec, new_localized(0, Spin::up, default_window(steps, 0)));
            return dist_to_dict(trace.distribution_after(static_cast<std::size_t>(steps)));
        },
        py::arg("steps") = 4, py::arg("theta") = 1.5707963267948966, py::arg("dephasing") = 0.0,
        "Final position distribution of an n-step walk from (up, x=0).");

    m.def(
        "exact_lg_test",
        [](int steps, double theta, double dephasing, const std::string& scheme) {
            ExactPipeline p =
                exact_lg_pipeline(WalkSpec{steps, CoinParams(theta), dephasing}, scheme_from_string(scheme));
            py::dict out;
            out["k"] = p.k;
            out["k12"] = p.k12;
            out["k23"] = p.k23;
            out["k13"] = p.k13;
            out["p_left"] = p.p_left;
            out["p_right"] = p.p_right;
            out["mean_left"] = p.mean_left;
            out["mean_right"] = p.mean_right;
            out["unconditioned"] = dist_to_dict(p.unconditioned);
            return out;
        },
        py::arg("steps") = 4, py::arg("theta") = 1.5707963267948966, py::arg("dephasing") = 0.0,
        py::arg("scheme") = "constant", "Exact LG pipeline values without sampling.");

    m.def(
        "run_lg_test",
        [](const py::dict& config, bool exact, std::int64_t bootstrap_resamples,
           std::int64_t monte_carlo_draws, bool return_events) {
            ProtocolConfig cfg = config_from_dict(config);
            AnalysisOptions options;
            options.bootstrap_resamples = bootstrap_resamples;
            options.monte_carlo_draws = monte_carlo_draws;
            LgTestOutput out = run_lg_test(cfg, exact, options);
            py::dict result;
            result["config"] = json_to_py(config_to_json(out.config));
            result["report"] = json_to_py(report_to_json(out.report));
            if (return_events && !exact) {
                auto events_list = [](const std::vector<EventRecord>& evs) {
                    py::list lst;
                    for (const EventRecord& ev : evs)
                        lst.append(json_to_py(event_to_json(ev)));
                    return lst;
                };
                py::dict ev;
                ev["none"] = events_list(out.events.none);
                ev["left"] = events_list(out.events.left);
                ev["right"] = events_list(out.events.right);
                result["events"] = ev;
            }
            return result;
        },
        py::arg("config") = py::dict(), py::arg("exact") = false,
        py::arg("bootstrap_resamples") = 10000, py::arg("monte_carlo_draws") = 10000,
        py::arg("return_events") = false,
        "Run the three-arm LG test; config is a (possibly partial) ProtocolConfig dict.");

    m.def(
        "negative_measurement",
        [](double theta, const std::string& branch, int steps, int removal_shift, double dephasing) {
            RemovalProtocol protocol = RemovalProtocol::conditioning_on(branch_from_name(branch), removal_shift);
            NegativeRunResult nr =
                negative_measurement_run(WalkSpec{steps, CoinParams(theta), dephasing}, protocol);
            py::dict out;
            out["retention_probability"] = nr.retention_probability;
            out["born_probability"] = nr.born_probability;
            out["retained_support"] = nr.retained_support;
            out["displaced_support"] = nr.displaced_support;
            out["conditional"] = dist_to_dict(nr.conditioned_final);
            out["final_distribution"] = dist_to_dict(nr.final_distribution);
            return out;
        },
        py::arg("theta") = 1.5707963267948966, py::arg("branch") = "left", py::arg("steps") = 4,
        py::arg("removal_shift") = 5, py::arg("dephasing") = 0.0,
        "Ideal-negative removal protocol evolved to t3.");

    m.def(
        "classical_binomial",
        [](int n, double p) { return dist_to_dict(classical_binomial_distribution(n, p)); },
        py::arg("n"), py::arg("p"), "Endpoint distribution of the classical random walk.");

    m.def(
        "classical_k_uniform",
        [](int n, const std::string& scheme) {
            auto trajectories = enumerate_trajectories(n);
            std::vector<double> w(trajectories.size(), 1.0 / static_cast<double>(trajectories.size()));
            return classical_k(trajectories, w, scheme_from_string(scheme));
        },
        py::arg("n") = 4, py::arg("scheme") = "constant",
        "Exact classical K for the uniform distribution over definite trajectories.");

    m.attr("__version__") = "0.1.0";
}
