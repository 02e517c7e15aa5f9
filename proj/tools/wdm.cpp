#include <iostream>

#include "wdm/cli.hpp"

int main(int argc, char** argv) { return wdm::cli::main_entry(argc, argv, std::cout, std::cerr); }
