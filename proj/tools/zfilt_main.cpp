#include <zfilt/cli.hpp>

int main(int argc, char** argv) { return zfilt::cli::run(argc, argv); }
