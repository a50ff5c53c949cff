// Placeholder CLI entry point; the full command surface lives further down
// the build.  Kept minimal so the target links while the library grows.
#include <cstdio>

int main() {
  std::puts("szego CLI: not yet wired");
  return 2;
}
