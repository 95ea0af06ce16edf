#pragma once

namespace ffhsi {

/// Entry point for the ffhsi command line. Returns 0 on success, 1 on a
/// runtime failure and 2 on a usage or configuration error.
int run_cli(int argc, char** argv);

}  // namespace ffhsi
