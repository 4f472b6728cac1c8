#pragma once

namespace treedet {

/// Exit codes: 0 success, 1 usage or validation error, 2 infeasible request,
/// 3 a reproduced example has a failing verdict.
int run_command(int argc, char** argv);

}  // namespace treedet
