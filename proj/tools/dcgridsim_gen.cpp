// Writes the synthetic two-day example inputs and a matching config.

#include "dcgridsim/io/example_data.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"dcgridsim-gen: generate the example input data set"};
    std::string out_dir = "data";
    std::uint64_t seed = 1;
    double lambda_peak = 330000.0;
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "generator seed")->capture_default_str();
    app.add_option("--lambda-peak", lambda_peak, "peak workload, requests/s")
        ->capture_default_str();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        dcgridsim::io::ExampleDataSpec spec;
        spec.seed = seed;
        spec.lambda_peak = lambda_peak;
        dcgridsim::io::write_example_inputs(out_dir, spec);
        std::ofstream cfg(out_dir + "/example.ini");
        cfg << dcgridsim::io::example_config_text();
        if (!cfg) throw std::runtime_error("cannot write example.ini");
        std::cout << "wrote workload, prices, regd, regd_hist, wetbulb and example.ini to "
                  << out_dir << "\n";
    } catch (const std::exception& e) {
        std::cerr << "dcgridsim-gen: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
