#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) { return bosonic::cli::run(argc, argv, std::cout, std::cerr); }
