#include "odecert/work.hpp"

namespace odecert {
namespace work {

namespace {
thread_local WorkCounters* g_active = nullptr;
}

WorkCounters* active() { return g_active; }
void attach(WorkCounters* counters) { g_active = counters; }

} // namespace work
} // namespace odecert
