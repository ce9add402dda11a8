#include "speedcast/cli.hpp"

int main(int argc, char** argv) {
  return speedcast::cli::run(argc, argv);
}
