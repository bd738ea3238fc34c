#pragma once

namespace twinsieve {

// Worker count for data-parallel passes: TWINSIEVE_THREADS if set and positive,
// otherwise the hardware concurrency (at least 1).
unsigned default_thread_count();

}  // namespace twinsieve
