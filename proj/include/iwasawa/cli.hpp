#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iwasawa::cli {

enum ExitCode : int {
    Success = 0,       // done, or every asserted check passed
    Failure = 1,       // a provable failure or refutation
    Indeterminate = 2, // no definite answer at this precision, or an unsupported shape
    Usage = 3,         // bad arguments or unparseable input
};

/// Runs one command line (without the program name). Output goes to `out`,
/// diagnostics to `err`. Identical arguments give byte-identical output.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct VerbInfo {
    std::string name;
    std::string summary;
    std::vector<std::string> operations; // library operations the verb reaches
};
const std::vector<VerbInfo>& verbs();

} // namespace iwasawa::cli
