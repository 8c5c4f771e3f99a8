#include "covario/cli.hpp"

int main(int argc, char** argv) {
    return covario::run_cli({argv + 1, argv + argc});
}
