#pragma once

#include <string>
#include <vector>

#include "qpencil/families.hpp"

namespace qp {

// Complex literals of the flat config format: "a+bi", "a-bi", "a", "bi".
Complex parse_complex(const std::string& s);
std::string format_complex(const Complex& z);  // "re+imi", round-trippable

std::vector<Complex> parse_complex_list(const std::string& s);

// Everything a run needs beyond the validated family config.
struct RunConfig {
    FamilyConfig family;
    Complex pos0;  // cover position at integer index 0
    Complex x0, y0;
};

// Flat key=value text: family, step, kappa, points (alias a/c/z), pos0, x0,
// y0, symmetric. '#' starts a comment.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

std::string config_to_text(const RunConfig& rc);

}  // namespace qp
