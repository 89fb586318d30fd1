#pragma once

#include <string>
#include <vector>

#include "sltwfs/term.hpp"

namespace sltwfs {

class Program;

// Text forms accepted back by the parser.  Renamed variables print as
// Name_Index, so distinct variables stay distinct after a round trip.
std::string render(const Term& t);
std::string render(const Atom& a);
std::string render(const Literal& l);
std::string render(const Clause& c);
std::string render(const Program& p);
std::string render(const std::vector<Literal>& conjunction);

}  // namespace sltwfs
