#include <iostream>

#include "vortexlab/acceptance.hpp"

int main() { return vortexlab::run_acceptance(std::cout, true) == 0 ? 0 : 1; }
