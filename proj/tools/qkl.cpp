#include <qkl/cli.hpp>

int main(int argc, char** argv) { return qkl::cli::run(argc, argv, std::cout, std::cerr); }
