#include "mage/cli.hpp"

int main(int argc, char** argv) { return mage::cli_main(argc, argv); }
