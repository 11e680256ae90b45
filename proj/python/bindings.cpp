// Python bindings: grid transforms, geometry builders, extremizers, sweeps and acceptance.
#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "conesq/acceptance.hpp"
#include "conesq/config.hpp"
#include "conesq/report.hpp"
#include "conesq/squarefn.hpp"

namespace py = pybind11;
using namespace conesq;

namespace {

py::array_t<cplx> values_view(const Field& f) {
    std::vector<py::ssize_t> shape(static_cast<std::size_t>(f.spec.dim), static_cast<py::ssize_t>(f.spec.N));
    py::array_t<cplx> a(shape);
    std::copy(f.values.begin(), f.values.end(), a.mutable_data());
    return a;
}

Field field_from(const GridSpec& g, Side side, py::array_t<cplx, py::array::c_style | py::array::forcecast> a,
                 const std::string& role) {
    if (static_cast<std::size_t>(a.size()) != g.size()) throw DomainError("array size differs from N^dim");
    Field f(g, side, role);
    std::copy(a.data(), a.data() + a.size(), f.values.begin());
    return f;
}

py::dict plank_dict(const Plank& p) {
    py::dict d;
    d["role"] = role_name(p.role);
    d["center"] = std::vector<double>(p.center.data(), p.center.data() + 3);
    d["half"] = std::vector<double>(p.half.data(), p.half.data() + 3);
    std::vector<std::vector<double>> ax;
    for (int i = 0; i < 3; ++i) ax.push_back({p.axes(0, i), p.axes(1, i), p.axes(2, i)});
    d["axes"] = ax;
    return d;
}

py::dict sweep_dict(const SweepResult& r) {
    py::dict d;
    d["experiment"] = r.experiment;
    d["series"] = r.series;
    d["engine"] = r.engine;
    d["n"] = r.n;
    d["p"] = r.p;
    std::vector<py::tuple> pts;
    for (const auto& q : r.points) pts.push_back(py::make_tuple(q.delta, q.ratio, q.stderr_));
    d["points"] = pts;
    d["alpha"] = r.fit.alpha;
    d["prefactor"] = r.fit.prefactor;
    d["residual"] = r.fit.residual;
    d["expected_alpha"] = r.has_expected ? py::object(py::float_(r.expected_alpha)) : py::object(py::none());
    return d;
}

}  // namespace

PYBIND11_MODULE(_conesq, m) {
    m.doc() = "Directional square functions: grids, plank geometry, wave-packet extremizers, exponent sweeps.";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
    py::register_exception<BandwidthError>(m, "BandwidthError", PyExc_RuntimeError);
    py::register_exception<SizingError>(m, "SizingError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<int, long, double>(), py::arg("dim"), py::arg("N"), py::arg("L"))
        .def_readonly("dim", &GridSpec::dim)
        .def_readonly("N", &GridSpec::N)
        .def_readonly("L", &GridSpec::L)
        .def_property_readonly("spacing", &GridSpec::spacing)
        .def_property_readonly("nyquist", &GridSpec::nyquist);

    py::enum_<Side>(m, "Side").value("physical", Side::physical).value("frequency", Side::frequency);

    py::class_<Field>(m, "Field")
        .def(py::init(&field_from), py::arg("spec"), py::arg("side"), py::arg("values"), py::arg("role") = "f")
        .def_readonly("spec", &Field::spec)
        .def_readonly("side", &Field::side)
        .def_readwrite("role", &Field::role)
        .def_property_readonly("values", &values_view);

    m.def("forward_transform", &forward_transform);
    m.def("inverse_transform", &inverse_transform);
    m.def("lp_norm", &lp_norm, py::arg("f"), py::arg("p"));
    m.def("write_field", &write_field, py::arg("f"), py::arg("path"), py::arg("single_precision") = false);
    m.def("read_field", &read_field);

    m.def("cone_planks", [](double delta) {
        std::vector<py::dict> out;
        for (const auto& p : cone_planks(delta)) out.push_back(plank_dict(p));
        return out;
    });
    m.def("separated_caps", [](int n, double delta) {
        std::vector<std::vector<double>> out;
        for (const auto& c : separated_caps(n, delta)) out.push_back({c.center.x(), c.center.y(), c.center.z()});
        return out;
    });

    m.def("fit_exponent", [](const std::vector<std::pair<double, double>>& pts) {
        FitResult f = fit_exponent(pts);
        return py::make_tuple(f.alpha, f.prefactor, f.residual);
    });
    m.def("parse_deltas", &parse_deltas);
    m.def("expected_exponent",
          [](const std::string& kind, int n, double p) { return expected_exponent(kind_from_name(kind), n, p); });

    m.def(
        "extremizer",
        [](const std::string& kind, int n, double delta, double p, double dilation, std::uint64_t seed) {
            ExtremizerConfig c;
            c.kind = kind_from_name(kind);
            c.n = n;
            c.delta = delta;
            c.p = p;
            c.dilation = dilation;
            c.seed = seed;
            Extremizer ex = build_extremizer(c);
            py::dict d;
            std::vector<py::dict> tubes, pieces;
            for (const auto& b : ex.tubes.boxes) tubes.push_back(plank_dict(b));
            for (const auto& b : ex.pieces.boxes) pieces.push_back(plank_dict(b));
            d["tubes"] = tubes;
            d["pieces"] = pieces;
            d["dilation"] = ex.dilation;
            d["expected_exponent"] = ex.expected_exponent;
            SamplerConfig sc;
            d["overlap_ratio"] = overlap_ratio(ex, p, sc).ratio;
            return d;
        },
        py::arg("kind"), py::arg("n") = 3, py::arg("delta") = 1.0 / 16, py::arg("p") = 8.0, py::arg("dilation") = 0.0,
        py::arg("seed") = 1);

    m.def(
        "run_sweep",
        [](const std::string& text, const std::string& experiment) {
            std::vector<py::dict> out;
            for (const auto& r : run_sweep(parse_config(text, experiment))) out.push_back(sweep_dict(r));
            return out;
        },
        py::arg("config"), py::arg("experiment") = "",
        "Runs a sweep from config text (key = value lines, optional [experiment] tables).");
    m.def(
        "sweep_csv",
        [](const std::string& text, const std::string& experiment) {
            return to_csv(run_sweep(parse_config(text, experiment)));
        },
        py::arg("config"), py::arg("experiment") = "");

    m.def(
        "accept",
        [](int id, int threads) {
            AcceptOptions o;
            o.threads = threads;
            o.memory_mb = memory_ceiling_mb(o.memory_mb);
            AcceptResult r;
            {
                py::gil_scoped_release nogil;
                r = run_criterion(id, o);
            }
            return py::make_tuple(r.pass, format_line(r));
        },
        py::arg("id"), py::arg("threads") = 1);
    m.attr("criterion_count") = kCriterionCount;
}
