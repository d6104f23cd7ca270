#include "mlkit/cli.hpp"

int main(int argc, char** argv) { return mlkit::cli::run(argc, argv); }
