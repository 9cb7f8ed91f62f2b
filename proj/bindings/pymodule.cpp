// Python bindings: a thin wrapper over the CLI dispatcher plus a few typed
// conveniences for direct library access.  All heavy lifting stays in C++;
// results cross the boundary as strings, ints and small containers.
#include "sullivan/cohomology.hpp"
#include "sullivan/dispatch.hpp"
#include "sullivan/errors.hpp"
#include "sullivan/gottlieb.hpp"
#include "sullivan/workspace.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace py = pybind11;
using namespace sullivan;

namespace {

std::tuple<int, std::string, std::string> run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

ModelPtr model_of(const std::string& path, const std::string& name) {
  Workspace w = load_workspace(path);
  auto it = w.models.find(name);
  if (it == w.models.end())
    throw parse_error("unknown model '" + name + "'");
  return it->second;
}

std::vector<size_t> betti_list(const std::string& path, const std::string& name,
                               int max_degree) {
  ModelPtr m = model_of(path, name);
  int top = max_degree < 0 ? certified_degree(*m) : max_degree;
  return betti_range(*m, top);
}

bool validate(const std::string& path, const std::string& name) {
  return validate_model(*model_of(path, name)).valid;
}

std::map<int, size_t> gottlieb_dims(const std::string& path, const std::string& name) {
  return gottlieb_groups(*model_of(path, name)).dim;
}

}  // namespace

PYBIND11_MODULE(pysullivan, m) {
  m.doc() = "Exact rational-homotopy computations on Sullivan models";

  py::register_exception<parse_error>(m, "ParseError", PyExc_ValueError);
  py::register_exception<bound_error>(m, "BoundError", PyExc_RuntimeError);

  m.def("run", &run, py::arg("args"),
        "Run a CLI command (same words as the `sullivan` binary, without the "
        "program name). Returns (exit_code, stdout, stderr); stdout holds the "
        "JSON result on success.");
  m.def("betti", &betti_list, py::arg("workspace"), py::arg("model"),
        py::arg("max_degree") = -1,
        "Betti numbers b_0..b_N of a model from a workspace file; N defaults "
        "to the model's certified degree.");
  m.def("validate", &validate, py::arg("workspace"), py::arg("model"),
        "Whether the named model passes all structural checks.");
  m.def("gottlieb_dims", &gottlieb_dims, py::arg("workspace"), py::arg("model"),
        "Dimension of the Gottlieb group in each degree up to the model's "
        "bound.");
}
