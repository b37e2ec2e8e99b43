#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "tauvar/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Batch runner for q-variety and A-module scripts"};
    std::string input = "-";
    std::string out_path;
    bool as_json = false;
    bool timing = false;
    unsigned seed = 0;
    app.add_option("script", input, "script file, or - for stdin");
    app.add_flag("--json", as_json, "emit the JSON report document");
    app.add_option("--out", out_path, "write the output to a file");
    app.add_option("--seed", seed, "seed for randomized commands (axioms)");
    app.add_flag("--timing", timing, "add per-command wall time to reports");
    CLI11_PARSE(app, argc, argv);

    std::string text;
    if (input == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(input);
        if (!in) {
            std::cerr << "cannot open " << input << "\n";
            return tauvar::cli::kInternalError;
        }
        text.assign(std::istreambuf_iterator<char>(in), {});
    }

    std::ostringstream os;
    int code = tauvar::cli::kOk;
    try {
        const tauvar::cli::Script script = tauvar::cli::parse(text);
        const tauvar::cli::RunResult r = tauvar::cli::run(script, {timing, seed});
        code = r.exit_code;
        if (as_json)
            os << tauvar::cli::document(r).dump(2) << "\n";
        else
            os << tauvar::cli::render_text(r);
        if (code != tauvar::cli::kOk && !r.reports.empty()) {
            const auto& last = r.reports.back();
            if (last.contains("error")) std::cerr << last["error"]["kind"].get<std::string>() << ": "
                                                  << last["error"]["message"].get<std::string>() << "\n";
        }
    } catch (const tauvar::cli::ParseError& e) {
        code = tauvar::cli::kParseError;
        std::cerr << input << ":" << tauvar::cli::describe(e) << "\n";
        if (as_json) os << tauvar::cli::parse_error_document(e).dump(2) << "\n";
    }

    if (out_path.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream out(out_path);
        out << os.str();
    }
    return code;
}
