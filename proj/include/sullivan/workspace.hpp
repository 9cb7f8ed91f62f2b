#pragma once

#include "sullivan/model.hpp"
#include "sullivan/presented.hpp"

#include <map>
#include <string>
#include <vector>

namespace sullivan {

// A parsed definition file: named models, morphisms and presentations.
// Morphism blocks are written in the direction of the underlying map of
// spaces, `morphism q : T -> S6`, so the assignments are on the RIGHT
// model's generators and the contravariant algebra morphism runs from the
// right model to the left one.  `arrows` keeps the original spelling for
// serialization.
struct Workspace {
  struct Arrow {
    std::string left, right;
  };
  std::vector<std::string> model_order, morphism_order, presentation_order;
  std::map<std::string, ModelPtr> models;
  std::map<std::string, Morphism> morphisms;
  std::map<std::string, Arrow> arrows;
  std::map<std::string, PresentedAlgebra> presentations;
};

// Grammar (line oriented, case sensitive, '#' comments):
//   model <name> ... end         with lines  generator <id> <degree>
//                                            d <id> = <poly>
//                                            bound <N>          (default 16)
//   morphism <name> : <L> -> <R> ... end  with lines  <id> |-> <poly>
//   presentation <name> ... end  with the model lines plus  relation <poly>
//   poly := term (('+'|'-') term)*
//   term := [rational '*']? <id>('^'<int>)? ... | rational
// Parse-time checks cover shape only (degrees, homogeneity, exponents on
// odd generators); mathematical validity is the job of validate_model and
// validate_presented.  All errors throw parse_error with line and column.
Workspace parse_workspace(const std::string& text);
Workspace load_workspace(const std::string& path);

// Canonical text form; parse(serialize(w)) reproduces w.
std::string serialize_workspace(const Workspace& w);

// The polynomial sub-grammar, exposed for tests and for anyone assembling
// elements from text.  el_str produces this grammar, and parse_poly accepts
// everything el_str prints.
Element parse_poly(const Algebra& a, const std::string& text, int line_no);

}  // namespace sullivan
