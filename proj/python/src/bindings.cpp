#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "su2hk/errors.hpp"
#include "su2hk/functional_inequalities.hpp"
#include "su2hk/heisenberg.hpp"
#include "su2hk/sde_sampler.hpp"
#include "su2hk/sr_distance.hpp"
#include "su2hk/su2_kernel.hpp"
#include "su2hk/version.hpp"

namespace py = pybind11;
using namespace su2hk;

namespace {

py::dict jet_dict(const Jet2& j) {
    py::dict d;
    d["f"] = j.f;
    d["fr"] = j.fr;
    d["fz"] = j.fz;
    d["frr"] = j.frr;
    d["frz"] = j.frz;
    d["fzz"] = j.fzz;
    return d;
}

KernelConfig make_config(double eps, double t_cross) {
    KernelConfig c;
    c.eps = eps;
    c.t_cross = t_cross;
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Subelliptic heat kernel on SU(2)";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "Su2hkError", PyExc_ValueError);

    py::class_<KernelEval>(m, "KernelEval")
        .def_readonly("value", &KernelEval::value)
        .def_readonly("abs_err", &KernelEval::abs_err)
        .def_property_readonly("representation", [](const KernelEval& e) { return to_string(e.representation); })
        .def("__repr__", [](const KernelEval& e) {
            return "KernelEval(value=" + std::to_string(e.value) + ", representation=" + to_string(e.representation) + ")";
        });

    m.def(
        "pt", [](double t, double r, double z, double eps, double t_cross) { return pt(t, r, z, make_config(eps, t_cross)); },
        py::arg("t"), py::arg("r"), py::arg("z"), py::arg("eps") = 1e-13, py::arg("t_cross") = 0.35);
    m.def("pt_spectral", [](double t, double r, double z) { return pt_spectral(t, r, z); });
    m.def("pt_integral", [](double t, double r, double z) { return pt_integral(t, r, z); });
    m.def("pt_cutlocus", &pt_cutlocus);
    m.def("pt_jet", [](double t, double r, double z) { return jet_dict(pt_jet(t, r, z)); });
    m.def("pt_diagonal", &pt_diagonal);
    m.def("green_function", &green_function);
    m.def(
        "pt_grid",
        [](double t, py::array_t<double> r, py::array_t<double> z) {
            auto rv = r.unchecked<1>();
            auto zv = z.unchecked<1>();
            py::array_t<double> out({rv.shape(0), zv.shape(0)});
            auto o = out.mutable_unchecked<2>();
            {
                py::gil_scoped_release nogil;
                KernelField f(t);
                for (py::ssize_t i = 0; i < rv.shape(0); ++i)
                    for (py::ssize_t j = 0; j < zv.shape(0); ++j) o(i, j) = f(rv(i), zv(j));
            }
            return out;
        },
        py::arg("t"), py::arg("r"), py::arg("z"), "p_t on the outer product of r and z");

    m.def(
        "cc_distance",
        [](double r, double z) {
            auto d = cc_distance(r, z);
            py::dict out;
            out["d"] = std::sqrt(d.d_squared);
            out["d_squared"] = d.d_squared;
            out["theta_star"] = d.theta_star;
            out["on_cut_locus"] = d.on_cut_locus;
            return out;
        },
        py::arg("r"), py::arg("z"));
    m.def("loglimit_distance", &loglimit_distance);
    m.def("small_time_asymptotic", &small_time_asymptotic);

    m.def("gaveau_kernel", [](double t, double r, double z) { return gaveau_kernel(t, {r, z}); });
    m.def("dilation_limit_error", &dilation_limit_error);

    m.def("a_const", &a_const, py::arg("t"));
    m.def("c_const", [](double t) { return c_const(t); }, py::arg("t"));

    m.def(
        "simulate",
        [](long n_paths, double step, double t_final, std::uint64_t seed, int threads) {
            MCConfig c;
            c.n_paths = n_paths;
            c.step = step;
            c.t_final = t_final;
            c.seed = seed;
            c.threads = threads;
            std::vector<GroupElement> s;
            {
                py::gil_scoped_release nogil;
                s = simulate_paths(c);
            }
            py::array_t<double> out({py::ssize_t(s.size()), py::ssize_t(3)});
            auto o = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < s.size(); ++i) {
                CylCoord cc = from_matrix(s[i]);
                o(i, 0) = cc.r;
                o(i, 1) = cc.theta;
                o(i, 2) = cc.z;
            }
            return out;
        },
        py::arg("n_paths") = 100000, py::arg("step") = 1e-3, py::arg("t_final") = 0.5, py::arg("seed") = 42,
        py::arg("threads") = 0, "endpoints (r, theta, z) of the Euler scheme, one row per path");
}
