#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "boehm/bridge.hpp"
#include "boehm/errors.hpp"
#include "boehm/harness.hpp"
#include "boehm/io.hpp"
#include "boehm/sheaf.hpp"

namespace py = pybind11;
using namespace boehm;
using nlohmann::json;

namespace {

std::vector<Interval> to_intervals(const std::vector<std::pair<double, double>>& v) {
  std::vector<Interval> out;
  for (const auto& [lo, hi] : v) out.push_back({lo, hi});
  return out;
}

std::vector<std::pair<double, double>> from_intervals(const std::vector<Interval>& v) {
  std::vector<std::pair<double, double>> out;
  for (const auto& iv : v) out.emplace_back(iv.lo, iv.hi);
  return out;
}

py::dict row_dict(const Row& r) {
  py::dict d;
  d["suite"] = r.suite;
  d["case_id"] = r.case_id;
  d["lemma_ref"] = r.lemma_ref;
  d["status"] = r.status;
  d["max_residual"] = r.max_residual;
  d["bound"] = r.bound;
  d["horizon"] = r.horizon;
  d["wall_ms"] = r.wall_ms;
  d["note"] = r.note;
  return d;
}

RunConfig config(const std::string& text) { return text.empty() ? RunConfig{} : config_from_json(json::parse(text)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Boehmians on open subsets of the real line";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<Unsupported>(m, "Unsupported", base.ptr());
  py::register_exception<DomainCollapsed>(m, "DomainCollapsed", base.ptr());
  py::register_exception<PreconditionViolated>(m, "PreconditionViolated", base.ptr());
  py::register_exception<NoRegularizerFound>(m, "NoRegularizerFound", base.ptr());
  py::register_exception<SectionsDisagree>(m, "SectionsDisagree", base.ptr());

  py::class_<OpenSet>(m, "OpenSet")
      .def(py::init([](const std::vector<std::pair<double, double>>& v) { return OpenSet(to_intervals(v)); }))
      .def_static("interval", &OpenSet::interval)
      .def_property_readonly("intervals", [](const OpenSet& u) { return from_intervals(u.intervals()); })
      .def("contains", py::overload_cast<double>(&OpenSet::contains, py::const_))
      .def("closure", &OpenSet::closure)
      .def("erode", [](const OpenSet& u, double e) { return erode(u, e); })
      .def("dilate", [](const OpenSet& u, double e) { return dilate(u, e); })
      .def("__eq__", [](const OpenSet& a, const OpenSet& b) { return a == b; })
      .def("__repr__", [](const OpenSet& u) { return "OpenSet" + to_string(u); });

  py::class_<CompactSet>(m, "CompactSet")
      .def(py::init([](const std::vector<std::pair<double, double>>& v) { return CompactSet(to_intervals(v)); }))
      .def_static("interval", &CompactSet::interval)
      .def_property_readonly("intervals", [](const CompactSet& k) { return from_intervals(k.intervals()); })
      .def("contains", py::overload_cast<double>(&CompactSet::contains, py::const_))
      .def("__repr__", [](const CompactSet& k) { return "CompactSet" + to_string(k); });

  py::class_<GridFunction>(m, "GridFunction")
      .def("__call__", &GridFunction::operator())
      .def_property_readonly("domain", &GridFunction::domain)
      .def_property_readonly("h", &GridFunction::h)
      .def("knots", [](const GridFunction& f) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : f.pieces())
          for (std::size_t i = 0; i < p.x.size(); ++i) out.emplace_back(p.x[i], p.y[i]);
        return out;
      });
  m.def("sample", [](const std::function<double(double)>& f, const OpenSet& u, double h) { return sample(f, u, h); },
        py::arg("f"), py::arg("domain"), py::arg("h") = 1e-3);
  m.def("sup_norm_on", &sup_norm_on);
  m.def("l1_norm", &l1_norm);

  py::class_<TestFunction>(m, "TestFunction")
      .def_static("bump", &TestFunction::bump)
      .def_static("product", &TestFunction::product)
      .def_property_readonly("radius", &TestFunction::radius)
      .def("__call__", &TestFunction::operator())
      .def("__repr__", &TestFunction::describe);
  m.def("convolve", &convolve);

  py::class_<DeltaSeq>(m, "DeltaSeq")
      .def_static("geometric", &DeltaSeq::geometric)
      .def("__getitem__", &DeltaSeq::operator[])
      .def("radius", &DeltaSeq::radius)
      .def_property_readonly("label", &DeltaSeq::label);
  m.def("default_witness", &default_witness);

  py::enum_<Status>(m, "Status")
      .value("verified", Status::verified)
      .value("refuted", Status::refuted)
      .value("inconclusive", Status::inconclusive);

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("status", &CheckResult::status)
      .def_readonly("max_residual", &CheckResult::max_residual)
      .def_readonly("bound", &CheckResult::bound)
      .def_readonly("horizon", &CheckResult::horizon)
      .def_readonly("case_id", &CheckResult::case_id)
      .def_readonly("lemma_ref", &CheckResult::lemma_ref)
      .def_readonly("note", &CheckResult::note)
      .def_readonly("residuals", &CheckResult::residuals)
      .def_property_readonly("verified", &CheckResult::verified)
      .def_property_readonly("refuted", &CheckResult::refuted)
      .def("__repr__", [](const CheckResult& r) {
        return "CheckResult(" + to_string(r.status) + ", residual=" + std::to_string(r.max_residual) + ")";
      });
  m.def("check_young", &check_young, py::arg("f"), py::arg("phi"), py::arg("k"), py::arg("eps"),
        py::arg("tol_quad") = 1e-6);

  py::class_<EquivParams>(m, "EquivParams")
      .def(py::init<>())
      .def_readwrite("horizon", &EquivParams::horizon)
      .def_readwrite("tol", &EquivParams::tol)
      .def_readwrite("compacts", &EquivParams::compacts)
      .def_readwrite("witness", &EquivParams::witness);

  py::class_<Boehmian>(m, "Boehmian")
      .def_property_readonly("domain", &Boehmian::domain)
      .def_property_readonly("tag", &Boehmian::tag)
      .def("__call__", &Boehmian::operator(), py::arg("n"))
      .def("__add__", [](const Boehmian& a, const Boehmian& b) { return add(a, b); })
      .def("__sub__", [](const Boehmian& a, const Boehmian& b) { return sub(a, b); })
      .def("__rmul__", [](const Boehmian& a, double r) { return scale(r, a); })
      .def("restrict", [](const Boehmian& a, const OpenSet& v) { return restrict(a, v); })
      .def("convolve", [](const Boehmian& a, const TestFunction& phi, double eps) { return conv_boehmian(a, phi, eps); });

  m.def("from_continuous", &from_continuous);
  m.def("zero", &zero_boehmian, py::arg("domain"), py::arg("h") = 1e-3);
  m.def("dirac", &dirac, py::arg("center"), py::arg("seq"), py::arg("domain"), py::arg("h") = 1e-3);
  m.def("_from_descriptor", [](const std::string& desc, const OpenSet& u, double h) {
    return io::boehmian(json::parse(desc), u, h);
  });
  m.def("is_fundamental", [](const Boehmian& f, const EquivParams& p) { return is_fundamental(f.rep, p); },
        py::arg("f"), py::arg("params") = EquivParams{});
  m.def("equivalent", &equivalent, py::arg("f"), py::arg("g"), py::arg("params") = EquivParams{});

  py::class_<GlueResult>(m, "GlueResult")
      .def_readonly("glued", &GlueResult::glued)
      .def_readonly("compatibility", &GlueResult::compatibility)
      .def_readonly("branch_agreement", &GlueResult::branch_agreement)
      .def_readonly("contracts", &GlueResult::contracts);
  m.def("glue_pair", &glue_pair, py::arg("f"), py::arg("g"), py::arg("params") = EquivParams{});
  m.def("glue_finite", [](const std::vector<Boehmian>& s, const EquivParams& p) {
    return glue_finite(SectionAssignment(s), p);
  }, py::arg("sections"), py::arg("params") = EquivParams{});
  m.def("glue_countable", [](const std::vector<Boehmian>& s, int n_max, const EquivParams& p) {
    return glue_countable(SectionAssignment(s), n_max, p);
  }, py::arg("sections"), py::arg("n_max"), py::arg("params") = EquivParams{});

  m.def("delta_converges", [](const Boehmian& f, const GridFunction& lim, const CompactSet& k, const EquivParams& p) {
    return delta_converges(f.rep, lim, k, p);
  });

  m.def("suite_ids", &suite_ids);
  m.def("_run_suite", [](const std::string& id, const std::string& cfg) {
    py::list out;
    for (const auto& r : run_suite(id, config(cfg))) out.append(row_dict(r));
    return out;
  });
  m.def("_run_scene", [](const std::string& scene, const std::string& cfg) {
    const auto out = run_scene(json::parse(scene), config(cfg));
    return py::make_tuple(out.report.dump(), out.exit_code);
  });
}
