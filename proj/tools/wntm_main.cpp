#include <vector>

#include "wntm/cli.hpp"

int main(int argc, char** argv) {
  return wntm::cli::dispatch(std::vector<std::string>(argv + 1, argv + argc));
}
