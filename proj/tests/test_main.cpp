#define DOCTEST_CONFIG_IMPLEMENT

#include <doctest.h>

#include "cde/precision.hpp"

int main(int argc, char** argv) {
  cde::set_precision_bits(128);
  doctest::Context ctx;
  ctx.applyCommandLine(argc, argv);
  return ctx.run();
}
