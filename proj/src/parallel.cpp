#include "condinf/parallel.hpp"

#include <cstdlib>
#include <string>

namespace condinf {

int
default_workers()
{
  const char* env = std::getenv("CONDINF_WORKERS");
  if (env == nullptr)
    return 1;
  try {
    int w = std::stoi(env);
    return w > 0 ? w : 1;
  } catch (...) {
    return 1;
  }
}

} // namespace condinf
