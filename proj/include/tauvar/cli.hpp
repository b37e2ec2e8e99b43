#ifndef TAUVAR_CLI_HPP
#define TAUVAR_CLI_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tauvar/amod.hpp"
#include "tauvar/errors.hpp"

namespace tauvar::cli {

struct Pos {
    std::size_t line = 1, col = 1;
};

class ParseError : public Error {
   public:
    ParseError(Pos pos, const std::string& message, std::vector<std::string> expected = {});
    Pos pos() const noexcept { return pos_; }
    const std::string& message() const noexcept { return message_; }
    // Sorted, deduplicated.
    const std::vector<std::string>& expected() const noexcept { return expected_; }

   private:
    Pos pos_;
    std::string message_;
    std::vector<std::string> expected_;
};

// Expression tree. Symbols: t (tau), T, g (generator of a finite backend),
// w (generator of F_q), S{k} (T^{1/q^k}).
struct Expr {
    enum class Kind { Int, Symbol, Root, Name, Neg, Add, Sub, Mul, Div, Pow, Matrix, Row, Zeros, Points, Tuple, Map, AModule };
    Kind kind = Kind::Int;
    Pos pos;
    long long value = 0;            // Int literal, Pow exponent, Root level
    std::string text;               // Symbol or Name
    std::vector<Expr> args;         // operands / rows / entries / fields
    std::vector<std::string> keys;  // AModule field names, parallel to args
};

struct FieldDecl {
    std::uint32_t q = 0;
    unsigned m = 1;
    bool func = false;
    bool perfect = false;
};

struct Let {
    std::string name;
    Expr value;
    Pos pos;
};

struct Command {
    std::string name;
    std::vector<Expr> args;
    std::vector<std::string> keys;  // keyword arguments
    std::vector<Expr> kwargs;
    Pos pos;
};

struct Statement {
    std::optional<Let> let;
    std::optional<Command> command;
};

struct Script {
    std::optional<FieldDecl> field;  // absent only for an empty script
    std::vector<Statement> statements;
};

const std::vector<std::string>& command_names();

Script parse(const std::string& text);
// A single expression with no names in scope.
Expr parse_expression(const std::string& text);

// Evaluation of a standalone expression over `field`.
OrePoly read_ore(const FieldPtr& field, const std::string& text);
OreMatrix read_matrix(const FieldPtr& field, const std::string& text);
QVariety read_variety(const FieldPtr& field, const std::string& text);
AModule read_amodule(const FieldPtr& field, const std::string& text);
APoly read_apoly(const FieldPtr& field, const std::string& text);

FieldPtr make_field(const FieldDecl& d);

// Canonical text; parse(render(...)) reproduces the object.
std::string render(const FieldDecl& d);
std::string render(const Expr& e);
std::string render(const Command& c);
std::string render(const OrePoly& p);
std::string render(const OreMatrix& m);
std::string render(const QVariety& v);
std::string render(const AModule& m);

struct RunOptions {
    bool timing = false;
    unsigned seed = 0;
};

enum ExitCode { kOk = 0, kParseError = 1, kCapabilityError = 2, kDomainError = 3, kInternalError = 4 };

struct RunResult {
    nlohmann::json reports = nlohmann::json::array();
    int exit_code = kOk;
};

RunResult run(const Script& script, const RunOptions& options = {});

// {"schema": 1, "reports": [...]}; keys sorted.
nlohmann::json document(const RunResult& r);
nlohmann::json parse_error_document(const ParseError& e);
// One block per report, one "path: value" line per leaf.
std::string render_text(const RunResult& r);
std::string describe(const ParseError& e);

}  // namespace tauvar::cli

#endif
