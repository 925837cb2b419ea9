#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zgreen/dichotomy.hpp"
#include "zgreen/genpinv.hpp"
#include "zgreen/green.hpp"
#include "zgreen/linsys.hpp"
#include "zgreen/oracle.hpp"
#include "zgreen/problem_io.hpp"

namespace py = pybind11;
using namespace zgreen;

namespace {

std::vector<Eigen::VectorXd> state_samples(const StateSequence& x) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<size_t>(x.size()));
  for (int n = x.lo(); n <= x.hi(); ++n) out.push_back(x.at(n));
  return out;
}

}  // namespace

PYBIND11_MODULE(zgreen, m) {
  m.doc() = "Bounded solutions of linear difference equations on the integer axis "
            "under exponential dichotomy on both semi-axes";

  py::register_exception<NotSolvable>(m, "NotSolvableError", PyExc_RuntimeError);
  py::register_exception<UnitCircleEigenvalue>(m, "UnitCircleError", PyExc_RuntimeError);
  py::register_exception<InfeasibleTruncation>(m, "InfeasibleTruncationError", PyExc_RuntimeError);

  py::class_<OperatorSequence>(m, "OperatorSequence")
      .def(py::init<int, std::vector<Matrix>, Matrix, Matrix, double>(), py::arg("window_lo"),
           py::arg("window"), py::arg("tail_minus"), py::arg("tail_plus"),
           py::arg("inv_tol_rel") = 1e-12)
      .def_static("constant", &OperatorSequence::constant, py::arg("a"))
      .def_property_readonly("dim", &OperatorSequence::dim)
      .def_property_readonly("window_lo", &OperatorSequence::window_lo)
      .def_property_readonly("window_hi", &OperatorSequence::window_hi)
      .def("matrix_at", &OperatorSequence::matrix_at, py::arg("n"))
      .def("transition", &OperatorSequence::transition, py::arg("m"), py::arg("n"))
      .def("propagator", &OperatorSequence::propagator, py::arg("n"))
      .def("propagator_inverse", &OperatorSequence::propagator_inverse, py::arg("n"))
      .def("sup_norm", &OperatorSequence::sup_norm);

  py::class_<ForcingSequence>(m, "ForcingSequence")
      .def(py::init<int, std::map<int, Vector>>(), py::arg("dim"),
           py::arg("entries") = std::map<int, Vector>{})
      .def_property_readonly("dim", &ForcingSequence::dim)
      .def("at", &ForcingSequence::at, py::arg("n"))
      .def("sup_norm", &ForcingSequence::sup_norm)
      .def_property_readonly("entries", &ForcingSequence::entries);

  py::class_<StateSequence>(m, "StateSequence")
      .def(py::init<int, std::vector<Vector>>(), py::arg("start"), py::arg("samples"))
      .def_property_readonly("lo", &StateSequence::lo)
      .def_property_readonly("hi", &StateSequence::hi)
      .def_property_readonly("dim", &StateSequence::dim)
      .def("at", &StateSequence::at, py::arg("n"))
      .def("slice", &StateSequence::slice, py::arg("lo"), py::arg("hi"))
      .def("sup_norm", &StateSequence::sup_norm)
      .def("samples", &state_samples);

  m.def("difference_operator", &difference_operator, py::arg("seq"), py::arg("x"));

  m.def("dichotomy_projector_plus", &dichotomy_projector_plus, py::arg("seq"),
        py::arg("gap_tol") = 1e-8);
  m.def("dichotomy_projector_minus", &dichotomy_projector_minus, py::arg("seq"),
        py::arg("gap_tol") = 1e-8);

  py::enum_<Axis>(m, "Axis").value("plus", Axis::plus).value("minus", Axis::minus);

  py::class_<DichotomyCertificate>(m, "DichotomyCertificate")
      .def(py::init([](Axis axis, Matrix projector, double k, double lam, int lo, int hi) {
             return DichotomyCertificate{axis, std::move(projector), k, lam, lo, hi};
           }),
           py::arg("axis"), py::arg("projector"), py::arg("k"), py::arg("lam"),
           py::arg("window_lo") = 0, py::arg("window_hi") = 0)
      .def_readonly("axis", &DichotomyCertificate::axis)
      .def_readonly("projector", &DichotomyCertificate::projector)
      .def_readonly("k", &DichotomyCertificate::k)
      .def_readonly("lam", &DichotomyCertificate::lambda)
      .def_readonly("window_lo", &DichotomyCertificate::window_lo)
      .def_readonly("window_hi", &DichotomyCertificate::window_hi);

  py::class_<VerificationReport>(m, "VerificationReport")
      .def_readonly("verified", &VerificationReport::verified)
      .def_readonly("max_ratio", &VerificationReport::max_ratio)
      .def_readonly("k_fit", &VerificationReport::k_fit)
      .def_readonly("lambda_fit", &VerificationReport::lambda_fit);

  m.def("verify_dichotomy", &verify_dichotomy, py::arg("seq"), py::arg("cert"),
        py::arg("win_lo"), py::arg("win_hi"));
  m.def("certify_axis", &certify_axis, py::arg("seq"), py::arg("axis"),
        py::arg("window_extent"), py::arg("gap_tol") = 1e-8);

  py::class_<GeneralizedInverse>(m, "GeneralizedInverse")
      .def_readonly("d_matrix", &GeneralizedInverse::d_matrix)
      .def_readonly("d_pinv", &GeneralizedInverse::d_pinv)
      .def_readonly("proj_ker", &GeneralizedInverse::proj_ker)
      .def_readonly("proj_coker", &GeneralizedInverse::proj_coker)
      .def_readonly("singular_values", &GeneralizedInverse::singular_values)
      .def_readonly("rank", &GeneralizedInverse::rank)
      .def_readonly("rank_tol", &GeneralizedInverse::rank_tol);

  py::class_<Classification>(m, "Classification")
      .def_readonly("dim_ker", &Classification::dim_ker)
      .def_readonly("dim_coker", &Classification::dim_coker)
      .def_readonly("r", &Classification::r)
      .def_readonly("d", &Classification::d)
      .def_readonly("index", &Classification::index)
      .def_readonly("trichotomy", &Classification::trichotomy)
      .def_readonly("dichotomy_on_z", &Classification::dichotomy_on_z);

  py::class_<CommutationReport>(m, "CommutationReport")
      .def_readonly("commutator_norm", &CommutationReport::commutator_norm)
      .def_readonly("pq_eq_q", &CommutationReport::pq_eq_q)
      .def_readonly("pq_eq_p", &CommutationReport::pq_eq_p);

  m.def("matching_operator", &matching_operator, py::arg("p"), py::arg("q"),
        py::arg("idem_tol") = 1e-8);
  m.def("pseudo_inverse", &pseudo_inverse, py::arg("m"), py::arg("rank_tol_rel") = 1e-10,
        py::arg("scale_floor") = 0.0);
  m.def("projector_commutation", &projector_commutation, py::arg("p"), py::arg("q"),
        py::arg("tol"));
  m.def("classify", &classify, py::arg("gi"), py::arg("p"), py::arg("q"),
        py::arg("rank_tol_rel") = 1e-10, py::arg("flag_tol") = 1e-10);
  m.def("tripotent_defect", &tripotent_defect, py::arg("d"));

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init<>())
      .def_readwrite("rank_tol_rel", &Tolerances::rank_tol_rel)
      .def_readwrite("gap_tol", &Tolerances::gap_tol)
      .def_readwrite("solvability_tol", &Tolerances::solvability_tol)
      .def_readwrite("verify_tol", &Tolerances::verify_tol);

  py::class_<SolvabilityReport>(m, "SolvabilityReport")
      .def_readonly("residual_vector", &SolvabilityReport::residual_vector)
      .def_readonly("residual_norm", &SolvabilityReport::residual_norm)
      .def_readonly("d_conditions", &SolvabilityReport::d_conditions)
      .def_readonly("solvable", &SolvabilityReport::solvable);

  py::class_<BoundedSolutionFamily>(m, "BoundedSolutionFamily")
      .def_readonly("particular", &BoundedSolutionFamily::particular)
      .def_readonly("basis", &BoundedSolutionFamily::basis)
      .def_readonly("r", &BoundedSolutionFamily::r)
      .def_readonly("xi_particular", &BoundedSolutionFamily::xi_particular)
      .def_readonly("matching_defect", &BoundedSolutionFamily::matching_defect);

  py::class_<GreenContext>(m, "GreenContext")
      .def(py::init<OperatorSequence, Tolerances>(), py::arg("seq"),
           py::arg("tolerances") = Tolerances{})
      .def_property_readonly("projector_plus", &GreenContext::projector_plus)
      .def_property_readonly("projector_minus", &GreenContext::projector_minus)
      .def_property_readonly("matching", &GreenContext::matching)
      .def_property_readonly("classification", &GreenContext::classification);

  m.def("condition_weight", &condition_weight, py::arg("ctx"), py::arg("k"));
  m.def("solvability_residual", &solvability_residual, py::arg("ctx"), py::arg("h"));
  m.def("matching_rhs", &matching_rhs, py::arg("ctx"), py::arg("h"));
  m.def("solve_matching", &solve_matching, py::arg("ctx"), py::arg("g"));
  m.def("semiaxis_solution", &semiaxis_solution, py::arg("ctx"), py::arg("xi"), py::arg("h"),
        py::arg("n"), py::arg("axis"));
  m.def("apply_green", &apply_green, py::arg("ctx"), py::arg("h"), py::arg("n"));
  m.def("matching_jump", &matching_jump, py::arg("ctx"), py::arg("h"));
  m.def("solve_bounded", &solve_bounded, py::arg("ctx"), py::arg("h"), py::arg("out_lo"),
        py::arg("out_hi"));
  m.def("quasi_solve", &quasi_solve, py::arg("ctx"), py::arg("h"), py::arg("out_lo"),
        py::arg("out_hi"));

  m.def(
      "truncated_bounded_solve",
      [](const GreenContext& ctx, const ForcingSequence& h, int half_width) {
        return truncated_bounded_solve(TruncatedProblem::build(ctx, h, half_width));
      },
      py::arg("ctx"), py::arg("h"), py::arg("half_width"));
  m.def("distance_mod_family", &distance_mod_family, py::arg("x"), py::arg("y"),
        py::arg("basis"));

  m.def("demo_problem_text", [](const std::string& name) {
    return serialize_problem(demo_problem(name));
  });
}
