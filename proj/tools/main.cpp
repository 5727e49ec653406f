#include "specwarp/cli.hpp"

int main(int argc, char** argv) { return specwarp::cli::run(argc, argv); }
