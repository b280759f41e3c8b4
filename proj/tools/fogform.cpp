#include "fogform/cli.hpp"

int main(int argc, char** argv) { return fogform::cli::run(argc, argv); }
