#pragma once

namespace leadlag {

/// Selects the OpenMP kernel or the serial reference path. Both produce
/// bit-identical results; the serial path exists for testing and benchmarks.
enum class Execution { serial, parallel };

/// Sets the OpenMP thread count (0 keeps the runtime default). No-op without OpenMP.
void set_thread_count(int threads);
[[nodiscard]] int thread_count();

} // namespace leadlag
