#include "milnorkit/app.hpp"

int main(int argc, char** argv) { return milnorkit::app::run(argc, argv); }
