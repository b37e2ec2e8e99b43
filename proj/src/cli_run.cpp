#include <algorithm>
#include <chrono>
#include <map>
#include <variant>

#include "tauvar/cli.hpp"

namespace tauvar::cli {

namespace {

using json = nlohmann::json;
using Value = std::variant<OrePoly, OreMatrix, QVariety, Morphism, AModule>;

const char* kind_name(const Value& v) {
    static const char* names[] = {"Ore polynomial", "matrix", "variety", "morphism", "amodule"};
    return names[v.index()];
}

class Evaluator {
   public:
    explicit Evaluator(FieldPtr field) : K_(std::move(field)) {}

    const FieldPtr& field() const { return K_; }
    void bind(const std::string& name, Value v) { env_.insert_or_assign(name, std::move(v)); }

    Value eval(const Expr& e) const {
        using K = Expr::Kind;
        switch (e.kind) {
            case K::Int: return OrePoly::constant(K_->from_int(e.value));
            case K::Symbol:
                if (e.text == "t") return OrePoly::tau(K_);
                if (e.text == "T") return OrePoly::constant(K_->T());
                if (e.text == "g") return OrePoly::constant(K_->generator());
                return OrePoly::constant(K_->from_fq(K_->fq().generator()));
            case K::Root: return OrePoly::constant(K_->root_of_T(static_cast<unsigned>(e.value)));
            case K::Name: return env_.at(e.text);
            case K::Neg: return neg(eval(e.args[0]));
            case K::Add: return add(eval(e.args[0]), eval(e.args[1]), false);
            case K::Sub: return add(eval(e.args[0]), eval(e.args[1]), true);
            case K::Mul: return mul(eval(e.args[0]), eval(e.args[1]));
            case K::Div: {
                const OrePoly b = poly(e.args[1]);
                if (b.is_zero()) throw DivisionByZero();
                if (b.degree() != 0) throw DomainError("division only by nonzero constants");
                return mul(eval(e.args[0]), Value(OrePoly::constant(b.coeff(0).inverse())));
            }
            case K::Pow: return power(poly(e.args[0]), e.value);
            case K::Matrix: return matrix_literal(e);
            case K::Zeros: return QVariety::zeros(TauSubmodule(as_matrix(eval(e.args[0]))));
            case K::Points: return points(e);
            case K::Map:
                return make_morphism(as_variety(eval(e.args[0])), as_variety(eval(e.args[1])),
                                     as_matrix(eval(e.args[2])));
            case K::AModule: return amodule(e);
            case K::Row:
            case K::Tuple: break;
        }
        throw DomainError("a row or tuple is not a value");
    }

    OrePoly poly(const Expr& e) const { return as_poly(eval(e)); }

    FieldElement scalar(const Expr& e) const {
        const OrePoly p = poly(e);
        if (p.degree() > 0) throw DomainError("expected a field element, got " + p.to_string());
        return p.coeff(0);
    }

    // Elements of A = F_q[T].
    APoly apoly(const Expr& e) const {
        using K = Expr::Kind;
        const auto& fq = K_->fq_ptr();
        switch (e.kind) {
            case K::Int: return APoly::constant(fq, fq->from_int(e.value));
            case K::Symbol:
                if (e.text == "T") return APoly::T(fq);
                if (e.text == "w") return APoly::constant(fq, fq->generator());
                break;
            case K::Neg: return -apoly(e.args[0]);
            case K::Add: return apoly(e.args[0]) + apoly(e.args[1]);
            case K::Sub: return apoly(e.args[0]) - apoly(e.args[1]);
            case K::Mul: return apoly(e.args[0]) * apoly(e.args[1]);
            case K::Div: {
                const APoly b = apoly(e.args[1]);
                if (b.is_zero()) throw DivisionByZero();
                if (b.degree() != 0) throw DomainError("division only by nonzero constants");
                return apoly(e.args[0]) * APoly::constant(fq, fq->inv(b.lead()));
            }
            case K::Pow:
                if (e.value < 0) throw DomainError("negative power in F_q[T]");
                return apoly(e.args[0]).pow(static_cast<unsigned>(e.value));
            default: break;
        }
        throw DomainError("'" + render(e) + "' is not an element of F_q[T]");
    }

    static OrePoly as_poly(const Value& v) {
        if (const auto* p = std::get_if<OrePoly>(&v)) return *p;
        if (const auto* m = std::get_if<OreMatrix>(&v); m && m->rows() == 1 && m->cols() == 1) return (*m)(0, 0);
        throw DomainError(std::string("expected an Ore polynomial, got a ") + kind_name(v));
    }
    static OreMatrix as_matrix(const Value& v) {
        if (const auto* m = std::get_if<OreMatrix>(&v)) return *m;
        if (const auto* p = std::get_if<OrePoly>(&v)) return OreMatrix(p->field(), 1, {{*p}});
        throw DomainError(std::string("expected a matrix, got a ") + kind_name(v));
    }
    static QVariety as_variety(const Value& v) {
        if (const auto* q = std::get_if<QVariety>(&v)) return *q;
        if (const auto* a = std::get_if<AModule>(&v)) return a->carrier();
        throw DomainError(std::string("expected a variety, got a ") + kind_name(v));
    }
    static Morphism as_morphism(const Value& v) {
        if (const auto* f = std::get_if<Morphism>(&v)) return *f;
        if (std::holds_alternative<OrePoly>(v) || std::holds_alternative<OreMatrix>(v)) {
            const OreMatrix L = as_matrix(v);
            return Morphism{QVariety::full(L.field(), L.cols()), QVariety::full(L.field(), L.rows()), L};
        }
        throw DomainError(std::string("expected a morphism, got a ") + kind_name(v));
    }
    static AModule as_amodule(const Value& v) {
        if (const auto* a = std::get_if<AModule>(&v)) return *a;
        throw DomainError(std::string("expected an amodule, got a ") + kind_name(v));
    }

   private:
    static Value neg(const Value& a) {
        if (const auto* p = std::get_if<OrePoly>(&a)) return -*p;
        const OreMatrix m = as_matrix(a);
        return OreMatrix(m.field(), m.rows(), m.cols()) - m;
    }

    static Value add(const Value& a, const Value& b, bool subtract) {
        if (std::holds_alternative<OrePoly>(a) && std::holds_alternative<OrePoly>(b)) {
            const OrePoly& x = std::get<OrePoly>(a);
            const OrePoly& y = std::get<OrePoly>(b);
            return subtract ? x - y : x + y;
        }
        const OreMatrix x = as_matrix(a), y = as_matrix(b);
        return subtract ? x - y : x + y;
    }

    static Value mul(const Value& a, const Value& b) {
        const auto* pa = std::get_if<OrePoly>(&a);
        const auto* pb = std::get_if<OrePoly>(&b);
        if (pa && pb) return *pa * *pb;
        if (pa || pb) {
            OreMatrix m = as_matrix(pa ? b : a);
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = pa ? *pa * m(i, j) : m(i, j) * *pb;
            return m;
        }
        return as_matrix(a) * as_matrix(b);
    }

    OrePoly power(const OrePoly& base, long long e) const {
        OrePoly b = base;
        if (e < 0) {
            if (b.degree() != 0) throw DomainError("negative powers only of nonzero constants");
            b = OrePoly::constant(b.coeff(0).inverse());
            e = -e;
        }
        OrePoly r = OrePoly::one(K_);
        for (long long i = 0; i < e; ++i) r = r * b;
        return r;
    }

    Value matrix_literal(const Expr& e) const {
        std::vector<OreRow> rows;
        for (const auto& row : e.args) {
            OreRow r;
            for (const auto& x : row.args) r.push_back(poly(x));
            rows.push_back(std::move(r));
        }
        const std::size_t cols = rows.front().size();
        return OreMatrix(K_, cols, std::move(rows));
    }

    Value points(const Expr& e) const {
        std::vector<std::vector<FieldElement>> pts;
        for (const auto& t : e.args) {
            std::vector<FieldElement> x;
            for (const auto& c : t.args) x.push_back(scalar(c));
            if (!pts.empty() && x.size() != pts.front().size()) throw DomainError("points of different lengths");
            pts.push_back(std::move(x));
        }
        return variety_from_points(K_, pts.front().size(), pts);
    }

    Value amodule(const Expr& e) const {
        std::optional<FieldElement> delta;
        std::optional<OreMatrix> phi;
        std::optional<QVariety> carrier;
        for (std::size_t i = 0; i < e.keys.size(); ++i) {
            const std::string& k = e.keys[i];
            if (k == "q") {
                if (e.args[i].kind != Expr::Kind::Int || static_cast<long long>(K_->q()) != e.args[i].value)
                    throw DomainError("amodule q does not match the field");
            } else if (k == "delta") {
                delta = scalar(e.args[i]);
            } else if (k == "PhiT") {
                phi = as_matrix(eval(e.args[i]));
            } else {
                carrier = as_variety(eval(e.args[i]));
            }
        }
        if (!carrier) carrier = QVariety::full(K_, phi->cols());
        return AModule(*carrier, *phi, *delta);
    }

    FieldPtr K_;
    std::map<std::string, Value> env_;
};

// ---------------------------------------------------------------- JSON

json j(const OreMatrix& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k).to_string());
        out.push_back(row);
    }
    return out;
}

json j(const std::vector<OreRow>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        json row = json::array();
        for (const auto& x : r) row.push_back(x.to_string());
        out.push_back(row);
    }
    return out;
}

json j(const klin::Matrix& m) {
    json out = json::array();
    for (const auto& r : m) {
        json row = json::array();
        for (const auto& x : r) row.push_back(x.to_string());
        out.push_back(row);
    }
    return out;
}

json j(const std::vector<APoly>& v) {
    json out = json::array();
    for (const auto& a : v) out.push_back(a.to_string());
    return out;
}

json j(const QVariety& v) {
    json seps = json::array();
    for (const auto& s : v.canon().seps) seps.push_back(s.to_string());
    return {{"n", v.n()},
            {"dim", dimension(v)},
            {"finite_part_dim", finite_part_dim(v)},
            {"irreducible", is_irreducible(v)},
            {"annihilator", j(v.ann().basis())},
            {"seps", seps},
            {"field", v.field()->descriptor().to_string()}};
}

struct Outcome {
    json result = json::object();
    bool lifted = false;
    bool a_in_ker_delta = false;
    bool bad_prime = false;
};

class Runner {
   public:
    Runner(Evaluator& ev, const RunOptions& opt) : ev_(ev), opt_(opt) {}

    Outcome exec(const Command& c) const {
        const std::string& n = c.name;
        Outcome o;
        if (n == "diag") {
            need(c, 1);
            const DiagForm d = diagonalize(matrix(c, 0));
            o.result = {{"U", j(d.U)}, {"D", j(d.D)}, {"V", j(d.V)}, {"r", d.r}};
            o.lifted = d.lifted && d.D.field()->kind() == FieldKind::PerfectClosure;
        } else if (n == "hermite") {
            need(c, 1);
            const HermiteForm h = hermite(matrix(c, 0));
            o.result = {{"H", j(h.H)}, {"T_left", j(h.T_left)}, {"pivots", h.pivots}, {"rank", h.rank()}};
        } else if (n == "radical") {
            need(c, 1);
            const RadicalResult r = radical_with_flag(TauSubmodule(matrix(c, 0)));
            o.result = {{"radical", j(r.module.basis())}};
            o.lifted = r.lifted;
        } else if (n == "zeros") {
            need(c, 1);
            const QVariety v = variety(c, 0);
            o.result = j(v);
            o.result["radicalized"] = v.radicalized();
            o.lifted = v.lifted();
        } else if (n == "annihilator") {
            need(c, 1);
            const QVariety v = variety(c, 0);
            o.result = {{"annihilator", j(v.ann().basis())}};
            o.lifted = v.lifted();
        } else if (n == "dim") {
            need(c, 1);
            const QVariety v = variety(c, 0);
            o.result = {{"dim", dimension(v)}, {"finite_part_dim", finite_part_dim(v)}, {"irreducible", is_irreducible(v)}};
            o.lifted = v.lifted();
        } else if (n == "tangent") {
            need(c, 1);
            const QVariety v = variety(c, 0);
            const TangentSpace t = tangent_space(v);
            o.result = {{"dim", t.dim()}, {"basis", j(t.basis)}};
            o.lifted = v.lifted();
        } else if (n == "image" || n == "kernel") {
            need(c, 1);
            const QVariety v = n == "image" ? image(morphism(c, 0)) : kernel(morphism(c, 0));
            o.result = j(v);
            o.lifted = v.lifted();
        } else if (n == "preimage") {
            need(c, 2);
            const QVariety v = preimage(morphism(c, 0), variety(c, 1));
            o.result = j(v);
            o.lifted = v.lifted();
        } else if (n == "sum" || n == "intersect") {
            need(c, 2);
            const QVariety a = variety(c, 0), b = variety(c, 1);
            const QVariety v = n == "sum" ? sum(a, b) : intersection(a, b);
            o.result = j(v);
            o.lifted = v.lifted();
        } else if (n == "quotient") {
            need(c, 2);
            const Quotient q = quotient(variety(c, 0), variety(c, 1));
            o.result = {{"Q", j(q.Q)}, {"Pi", j(q.Pi.L)}};
            o.lifted = q.Q.lifted();
        } else if (n == "separable") {
            need(c, 1);
            const Morphism f = morphism(c, 0);
            const Differential d = differential(f);
            o.result = {{"separable", is_separable(f)}, {"differential", j(d.dL)}};
        } else if (n == "torsion") {
            need(c, 1, {"a"});
            const TorsionReport t = torsion(amodule(c, 0), apoly(c, "a"));
            o.result = {{"a", t.a.to_string()},
                        {"dim_fq", t.dim_fq},
                        {"infinite", t.infinite},
                        {"variety", j(t.variety)},
                        {"module_quotient_dim", t.module_quotient_dim ? json(*t.module_quotient_dim) : json()}};
            o.a_in_ker_delta = t.a_in_ker_delta;
            o.lifted = t.variety.lifted();
        } else if (n == "torsionpoints") {
            need(c, 1, {"a", "max_ext", "max_points"});
            const TorsionPoints t = torsion_points(amodule(c, 0), apoly(c, "a"),
                                                   static_cast<unsigned>(integer(c, "max_ext", 64)),
                                                   static_cast<std::size_t>(integer(c, "max_points", 1 << 16)));
            json basis = json::array();
            for (const auto& b : t.basis) {
                json row = json::array();
                for (const auto& x : b) row.push_back(x.to_string());
                basis.push_back(row);
            }
            json action = json::array();
            for (const auto& col : t.action) {
                json r = json::array();
                for (Digit d : col) r.push_back(fqpoly::render_scalar(ev_.field()->fq(), d));
                action.push_back(r);
            }
            o.result = {{"field", t.field->descriptor().to_string()},
                        {"dim_fq", t.basis.size()},
                        {"count", t.points.size()},
                        {"basis", basis},
                        {"action", action},
                        {"elementary_divisors", j(t.elementary_divisors)}};
        } else if (n == "rank") {
            need(c, 1, {"budget"});
            const RankReport r = rank(amodule(c, 0), static_cast<std::size_t>(integer(c, "budget", 0)));
            json est = json::array();
            for (const auto& e : r.estimates)
                est.push_back({{"prime", e.prime.to_string()},
                               {"dim_fq", e.dim_fq},
                               {"estimate", e.estimate ? json(*e.estimate) : json()}});
            o.result = {{"rank", r.rank},
                        {"estimates", est},
                        {"skipped", j(r.skipped)},
                        {"bad_primes", j(r.bad_primes)},
                        {"method", r.method}};
            o.bad_prime = !r.bad_primes.empty();
        } else if (n == "tate") {
            need(c, 1, {"pi", "n"});
            const TateReport t = tate_check(amodule(c, 0), apoly(c, "pi"), static_cast<unsigned>(integer(c, "n", 3)));
            o.result = {{"r", t.r}, {"dims", t.dims}, {"ok", t.ok}};
        } else if (n == "jacobian" || n == "gmax") {
            need(c, 1, {"H"});
            const AModule m = amodule(c, 0);
            const QVariety h = Evaluator::as_variety(ev_.eval(kw(c, "H")));
            const QVariety v = n == "jacobian" ? jacobian(m, h) : g_max(m, h);
            o.result = j(v);
            if (n == "gmax") o.result["sufficiently_generic"] = is_sufficiently_generic(m, h);
        } else if (n == "axioms") {
            need(c, 1, {"trials"});
            const std::size_t fails =
                check_axioms(amodule(c, 0), static_cast<unsigned>(integer(c, "trials", 10)), opt_.seed);
            o.result = {{"failures", fails}, {"seed", opt_.seed}};
        } else {
            throw DomainError("unknown command " + n);
        }
        return o;
    }

   private:
    static void need(const Command& c, std::size_t args, const std::vector<std::string>& allowed = {}) {
        if (c.args.size() != args)
            throw DomainError(c.name + " takes " + std::to_string(args) + " operand(s), got " +
                              std::to_string(c.args.size()));
        for (const auto& k : c.keys)
            if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
                throw DomainError(c.name + " has no option " + k);
    }
    static const Expr& kw(const Command& c, const std::string& key) {
        for (std::size_t i = 0; i < c.keys.size(); ++i)
            if (c.keys[i] == key) return c.kwargs[i];
        throw DomainError(c.name + " needs " + key + "=");
    }
    static long long integer(const Command& c, const std::string& key, long long fallback) {
        for (std::size_t i = 0; i < c.keys.size(); ++i)
            if (c.keys[i] == key) {
                if (c.kwargs[i].kind != Expr::Kind::Int) throw DomainError(key + " must be an integer literal");
                return c.kwargs[i].value;
            }
        return fallback;
    }
    OreMatrix matrix(const Command& c, std::size_t i) const { return Evaluator::as_matrix(ev_.eval(c.args[i])); }
    QVariety variety(const Command& c, std::size_t i) const {
        const Value v = ev_.eval(c.args[i]);
        if (std::holds_alternative<OreMatrix>(v) || std::holds_alternative<OrePoly>(v))
            return QVariety::zeros(TauSubmodule(Evaluator::as_matrix(v)));
        return Evaluator::as_variety(v);
    }
    Morphism morphism(const Command& c, std::size_t i) const { return Evaluator::as_morphism(ev_.eval(c.args[i])); }
    AModule amodule(const Command& c, std::size_t i) const { return Evaluator::as_amodule(ev_.eval(c.args[i])); }
    APoly apoly(const Command& c, const std::string& key) const { return ev_.apoly(kw(c, key)); }

    Evaluator& ev_;
    const RunOptions& opt_;
};

std::pair<int, std::string> classify(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return {kParseError, "ParseError"};
    if (dynamic_cast<const NoSplittingFound*>(&e)) return {kCapabilityError, "NoSplittingFound"};
    if (dynamic_cast<const CapabilityError*>(&e)) return {kCapabilityError, "CapabilityError"};
    if (dynamic_cast<const InvariantViolation*>(&e)) return {kInternalError, "InvariantViolation"};
    if (dynamic_cast<const NotAMorphismInto*>(&e)) return {kDomainError, "NotAMorphismInto"};
    if (dynamic_cast<const NotASubvariety*>(&e)) return {kDomainError, "NotASubvariety"};
    if (dynamic_cast<const NotASubmodule*>(&e)) return {kDomainError, "NotASubmodule"};
    if (dynamic_cast<const InsufficientPrimes*>(&e)) return {kDomainError, "InsufficientPrimes"};
    if (dynamic_cast<const MixedBackends*>(&e)) return {kDomainError, "MixedBackends"};
    if (dynamic_cast<const DivisionByZero*>(&e)) return {kDomainError, "DivisionByZero"};
    if (dynamic_cast<const DomainError*>(&e)) return {kDomainError, "DomainError"};
    return {kInternalError, "InternalError"};
}

void flatten(const json& v, const std::string& path, std::string& out) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it) flatten(*it, path.empty() ? it.key() : path + "." + it.key(), out);
    } else if (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array())) {
        for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], path + "[" + std::to_string(i) + "]", out);
    } else {
        out += path + ": " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    }
}

}  // namespace

RunResult run(const Script& script, const RunOptions& options) {
    RunResult out;
    if (!script.field) return out;
    const auto fail = [&](json report, const std::exception& e) {
        const auto [code, kind] = classify(e);
        report["error"] = {{"kind", kind}, {"message", e.what()}};
        out.reports.push_back(std::move(report));
        out.exit_code = code;
    };
    std::optional<Evaluator> ev;
    try {
        ev.emplace(make_field(*script.field));
    } catch (const std::exception& e) {
        fail({{"command", render(*script.field)}}, e);
        return out;
    }
    const Runner runner(*ev, options);
    for (const auto& st : script.statements) {
        if (st.let) {
            try {
                ev->bind(st.let->name, ev->eval(st.let->value));
            } catch (const std::exception& e) {
                fail({{"command", "let " + st.let->name + " = " + render(st.let->value) + ";"}}, e);
                return out;
            }
            continue;
        }
        const Command& c = *st.command;
        json report = {{"command", render(c)}};
        try {
            const auto t0 = std::chrono::steady_clock::now();
            const Outcome o = runner.exec(c);
            const auto t1 = std::chrono::steady_clock::now();
            report["result"] = o.result;
            report["flags"] = {{"lifted_to_perfect_closure", o.lifted},
                               {"a_in_ker_delta", o.a_in_ker_delta},
                               {"bad_prime_suspected", o.bad_prime}};
            if (options.timing) report["timing_ms"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
            out.reports.push_back(std::move(report));
        } catch (const std::exception& e) {
            fail(std::move(report), e);
            return out;
        }
    }
    return out;
}

OrePoly read_ore(const FieldPtr& field, const std::string& text) {
    return Evaluator(field).poly(parse_expression(text));
}

OreMatrix read_matrix(const FieldPtr& field, const std::string& text) {
    return Evaluator::as_matrix(Evaluator(field).eval(parse_expression(text)));
}

QVariety read_variety(const FieldPtr& field, const std::string& text) {
    return Evaluator::as_variety(Evaluator(field).eval(parse_expression(text)));
}

AModule read_amodule(const FieldPtr& field, const std::string& text) {
    return Evaluator::as_amodule(Evaluator(field).eval(parse_expression(text)));
}

APoly read_apoly(const FieldPtr& field, const std::string& text) {
    return Evaluator(field).apoly(parse_expression(text));
}

json document(const RunResult& r) {
    json d = {{"schema", 1}, {"reports", r.reports}};
    if (r.exit_code != kOk) d["exit_code"] = r.exit_code;
    return d;
}

json parse_error_document(const ParseError& e) {
    return {{"schema", 1},
            {"reports", json::array()},
            {"exit_code", kParseError},
            {"error",
             {{"kind", "ParseError"},
              {"line", e.pos().line},
              {"column", e.pos().col},
              {"message", e.message()},
              {"expected", e.expected()}}}};
}

std::string render_text(const RunResult& r) {
    std::string out;
    for (const auto& rep : r.reports) {
        out += "> " + rep.at("command").get<std::string>() + "\n";
        json rest = rep;
        rest.erase("command");
        flatten(rest, "", out);
    }
    return out;
}

}  // namespace tauvar::cli
