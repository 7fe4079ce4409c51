#pragma once

// Command-line front end.  Subcommands:
//
//   invariants <in.json> [--numeric|--closed|--both]   boundary invariants
//   reduce <in.json>                                    normal-form reduction
//   curve invariants <in.json>                          curve-germ invariants
//   curve reconstruct --alpha A --beta B ...            cuspidal-edge curve ODE
//   parabola <in.json> [--svg out.svg]                  curvature parabola
//   ruled scan <in.json>                                birth reports + CSV
//   ruled mesh <in.json> --out mesh.obj                 OBJ export
//   harness --seed S --draws N                          closed-vs-oracle sweep
//
// Exit codes: 0 success, 1 usage, 2 input/schema violation (with the JSON
// location), 3 mathematical precondition failure (with the error name).
// Identical arguments and seed produce byte-identical output; every number
// is serialized with 17 significant digits.

#include <iosfwd>
#include <string>
#include <vector>

namespace cuspedge {

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace cuspedge
