#include <metriclab/cli.hpp>

int main(int argc, char** argv) {
    return metriclab::run_cli(argc, argv, std::cout, std::cerr);
}
