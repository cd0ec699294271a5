#pragma once
// Command-line front end: one subcommand per computation, machine-readable
// JSON or CSV on stdout, structured error objects on stderr. Exit codes: 0 on
// success, 1 when a computation fails or a verification suite reports a
// failure, 2 on usage errors. Usage errors never write output files.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <regex>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sconst/bethe.hpp"
#include "sconst/determinants.hpp"
#include "sconst/errors.hpp"
#include "sconst/numerics.hpp"
#include "sconst/three_point.hpp"
#include "sconst/verify.hpp"
#include "sconst/vertex_model.hpp"

namespace sconst::cli {

struct UsageError : Error {
    explicit UsageError(const std::string& msg) : Error("Usage", msg) {}
};

namespace detail {

using nlohmann::json;

// Complex literals are a+bi with mandatory decimal points in both parts, so
// "1", "1i" and exponent forms are rejected rather than half-parsed.
inline Complex parse_complex(const std::string& text) {
    static const std::regex form(R"(^([+-]?\d+\.\d+)([+-]\d+\.\d+)i$)");
    std::smatch m;
    if (!std::regex_match(text, m, form))
        throw UsageError("bad complex literal '" + text +
                         "', expected a+bi with decimal points, e.g. 0.0+1.0i");
    double re = 0.0, im = 0.0;
    const std::string re_s = m[1].str(), im_s = m[2].str();
    std::from_chars(re_s.data(), re_s.data() + re_s.size(), re);
    const char* ib = im_s.data() + (im_s[0] == '+' ? 1 : 0);
    std::from_chars(ib, im_s.data() + im_s.size(), im);
    if (im_s[0] == '-') im = -im;
    return Complex{re, im};
}

inline std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    if (text.empty()) return parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
}

inline std::vector<Complex> parse_complex_list(const std::string& text) {
    std::vector<Complex> out;
    for (const std::string& p : split_commas(text)) out.push_back(parse_complex(p));
    return out;
}

inline int parse_int(const std::string& text) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw UsageError("bad integer '" + text + "'");
    return v;
}

inline std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const std::string& p : split_commas(text)) out.push_back(parse_int(p));
    return out;
}

inline json cplx(Complex c) { return json::array({c.real(), c.imag()}); }

inline json cplx_list(const std::vector<Complex>& v) {
    json a = json::array();
    for (const Complex& c : v) a.push_back(cplx(c));
    return a;
}

// CSV flattening: objects join keys with '_', arrays of two numbers are
// complex and become _re/_im columns, other arrays get index suffixes.
inline void flatten_into(const std::string& prefix, const json& j,
                         std::vector<std::pair<std::string, std::string>>& cols) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            flatten_into(prefix.empty() ? k : prefix + "_" + k, v, cols);
    } else if (j.is_array()) {
        if (j.size() == 2 && j[0].is_number() && j[1].is_number()) {
            cols.emplace_back(prefix + "_re", j[0].dump());
            cols.emplace_back(prefix + "_im", j[1].dump());
        } else {
            for (std::size_t i = 0; i < j.size(); ++i)
                flatten_into(prefix + "_" + std::to_string(i), j[i], cols);
        }
    } else if (j.is_string()) {
        cols.emplace_back(prefix, j.get<std::string>());
    } else {
        cols.emplace_back(prefix, j.dump());
    }
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

inline std::string render_csv(const json& doc) {
    // The verification report is a table of checks; everything else is a
    // single flattened row of the result object.
    std::string text;
    if (doc.at("command") == "verify") {
        text = "name,passed,max_dev,tol,detail\n";
        for (const json& c : doc.at("result").at("checks")) {
            text += csv_quote(c.at("name").get<std::string>()) + ",";
            text += c.at("passed").dump() + ",";
            text += c.at("max_dev").dump() + ",";
            text += c.at("tol").dump() + ",";
            text += csv_quote(c.at("detail").get<std::string>()) + "\n";
        }
        return text;
    }
    std::vector<std::pair<std::string, std::string>> cols;
    flatten_into("", doc.at("result"), cols);
    std::string header, row;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) {
            header += ",";
            row += ",";
        }
        header += csv_quote(cols[i].first);
        row += csv_quote(cols[i].second);
    }
    return header + "\n" + row + "\n";
}

inline std::string render(const json& doc, const std::string& format) {
    if (format == "csv") return render_csv(doc);
    return doc.dump(2) + "\n";
}

inline json error_object(const std::string& kind, const std::string& message,
                         const std::string& context) {
    return json{{"error",
                 {{"kind", kind}, {"message", message}, {"context", context}}}};
}

struct Outcome {
    json doc;
    int code = 0;
};

inline void require_count(const char* flag, std::size_t got, int want) {
    if (static_cast<int>(got) != want)
        throw UsageError(std::string(flag) + " has " + std::to_string(got) +
                         " entries, expected " + std::to_string(want));
}

}  // namespace detail

// Parse and execute one invocation. args excludes the program name; output
// goes to `out` (or the --out file), errors to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
    using detail::json;
    CLI::App app{"Structure constants of SU(2) spin-chain operators from "
                 "determinant formulas, with lattice oracles"};
    app.name("sconst");
    app.require_subcommand(1);

    std::string format = "json";
    std::string out_path;
    bool check = false;
    std::uint64_t seed = 20260822;
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", out_path, "write output to this file instead of stdout");
    app.add_flag("--check", check,
                 "run twice and require bit-for-bit identical output");
    app.add_option("--seed", seed, "seed for randomized verification draws");

    struct {
        int n = 0;
        std::string w, z;
        std::string eta = "0.0+1.0i";
    } dwpf_in;
    CLI::App* dwpf_cmd = app.add_subcommand(
        "dwpf", "domain-wall partition function as the rapidity determinant");
    dwpf_cmd->fallthrough();
    dwpf_cmd->add_option("--N", dwpf_in.n, "block size")->required();
    dwpf_cmd->add_option("--w", dwpf_in.w, "row rapidities, comma separated")
        ->required();
    dwpf_cmd->add_option("--z", dwpf_in.z, "column rapidities, comma separated")
        ->required();
    dwpf_cmd->add_option("--eta", dwpf_in.eta, "crossing parameter");

    struct {
        int L = 0;
        std::string u, v;
        std::string z = "0.0+0.5i";
        std::string eta = "0.0+1.0i";
        std::string zs;
    } slv_in;
    CLI::App* slv_cmd = app.add_subcommand(
        "slavnov", "restricted scalar product of a Bethe state with dual magnons");
    slv_cmd->fallthrough();
    slv_cmd->add_option("--L", slv_in.L, "chain length")->required();
    slv_cmd->add_option("--u", slv_in.u, "Bethe rapidities, comma separated")
        ->required();
    slv_cmd->add_option("--v", slv_in.v, "dual rapidities, comma separated");
    slv_cmd->add_option("--z", slv_in.z, "homogeneous column rapidity");
    slv_cmd->add_option("--eta", slv_in.eta, "crossing parameter");
    slv_cmd->add_option("--zs", slv_in.zs,
                        "explicit column rapidities; skips the on-shell check");

    struct {
        int L = 0;
        std::string u;
        std::string z = "0.0+0.5i";
        std::string eta = "0.0+1.0i";
    } gd_in;
    CLI::App* gd_cmd =
        app.add_subcommand("gaudin", "norm of an on-shell Bethe state");
    gd_cmd->fallthrough();
    gd_cmd->add_option("--L", gd_in.L, "chain length")->required();
    gd_cmd->add_option("--u", gd_in.u, "Bethe rapidities, comma separated")
        ->required();
    gd_cmd->add_option("--z", gd_in.z, "homogeneous column rapidity");
    gd_cmd->add_option("--eta", gd_in.eta, "crossing parameter");

    struct {
        int L = 0, n = 0;
        std::string modes;
        std::string z = "0.0+0.5i";
        std::string eta = "0.0+1.0i";
        double tol = 1e-10;
    } be_in;
    CLI::App* be_cmd =
        app.add_subcommand("bethe", "solve the Bethe equations from mode numbers");
    be_cmd->fallthrough();
    be_cmd->add_option("--L", be_in.L, "chain length")->required();
    be_cmd->add_option("--N", be_in.n, "magnon number")->required();
    be_cmd->add_option("--modes", be_in.modes, "mode numbers, comma separated");
    be_cmd->add_option("--z", be_in.z, "homogeneous column rapidity");
    be_cmd->add_option("--eta", be_in.eta, "crossing parameter");
    be_cmd->add_option("--tol", be_in.tol, "residual tolerance");

    struct {
        std::string lengths, magnons;
        std::string modes1, modes2, modes3;
        std::string z = "0.0+0.5i";
        std::string eta = "0.0+1.0i";
    } sc_in;
    CLI::App* sc_cmd = app.add_subcommand(
        "sc", "tree-level structure constant of three Bethe states");
    sc_cmd->fallthrough();
    sc_cmd->add_option("--L", sc_in.lengths, "operator lengths L1,L2,L3")
        ->required();
    sc_cmd->add_option("--N", sc_in.magnons, "magnon numbers N1,N2,N3")
        ->required();
    sc_cmd->add_option("--modes-1", sc_in.modes1, "mode numbers of operator 1");
    sc_cmd->add_option("--modes-2", sc_in.modes2, "mode numbers of operator 2");
    sc_cmd->add_option("--modes-3", sc_in.modes3, "mode numbers of operator 3");
    sc_cmd->add_option("--z", sc_in.z, "homogeneous column rapidity");
    sc_cmd->add_option("--eta", sc_in.eta, "crossing parameter");

    struct {
        std::string word, role;
        std::string side = "initial";
    } map_in;
    CLI::App* map_cmd = app.add_subcommand(
        "map", "map a single-trace word to its spin-chain basis state");
    map_cmd->fallthrough();
    map_cmd->add_option("--word", map_in.word, "trace word, e.g. Tr(ZZXZ)")
        ->required();
    map_cmd->add_option("--role", map_in.role, "operator position: O1, O2, or O3")
        ->required()
        ->check(CLI::IsMember({"O1", "O2", "O3"}));
    map_cmd->add_option("--side", map_in.side, "initial or final state")
        ->check(CLI::IsMember({"initial", "final"}));

    struct {
        std::string suite;
        int max_n = 4;
        int trials = 3;
        std::string geometry;
    } vf_in;
    CLI::App* vf_cmd =
        app.add_subcommand("verify", "run a named suite of oracle checks");
    vf_cmd->fallthrough();
    vf_cmd->add_option("suite", vf_in.suite,
                       "one of weights, dwpf, slavnov, gaudin, sc, all")
        ->required()
        ->check(CLI::IsMember(verify::suite_names()));
    vf_cmd->add_option("--max-N", vf_in.max_n,
                       "largest block size in the lattice comparison");
    vf_cmd->add_option("--trials", vf_in.trials,
                       "root choices per geometry in the ratio check");
    vf_cmd->add_option("--geometry", vf_in.geometry,
                       "single geometry L1,L2,L3,N1,N2,N3 for the ratio check");

    std::string context = "argument parsing";
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app.parse(std::move(reversed));
        } catch (const CLI::CallForHelp&) {
            const auto parsed = app.get_subcommands();
            out << (parsed.empty() ? app.help() : parsed.front()->help());
            return 0;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return 0;
        } catch (const CLI::ParseError& e) {
            err << detail::error_object("Usage", e.what(), context).dump(2) << "\n";
            return 2;
        }

        std::function<detail::Outcome()> job;
        if (dwpf_cmd->parsed()) {
            context = "dwpf";
            job = [&]() {
                const std::vector<Complex> w = detail::parse_complex_list(dwpf_in.w);
                const std::vector<Complex> z = detail::parse_complex_list(dwpf_in.z);
                const Complex eta = detail::parse_complex(dwpf_in.eta);
                detail::require_count("--w", w.size(), dwpf_in.n);
                detail::require_count("--z", z.size(), dwpf_in.n);
                detail::Outcome o;
                o.doc = json{{"command", "dwpf"},
                             {"inputs",
                              {{"N", dwpf_in.n},
                               {"w", detail::cplx_list(w)},
                               {"z", detail::cplx_list(z)},
                               {"eta", detail::cplx(eta)}}},
                             {"result", {{"value", detail::cplx(izergin(w, z, eta))}}},
                             {"diagnostics", json::object()}};
                return o;
            };
        } else if (slv_cmd->parsed()) {
            context = "slavnov";
            job = [&]() {
                const std::vector<Complex> u = detail::parse_complex_list(slv_in.u);
                const std::vector<Complex> v = detail::parse_complex_list(slv_in.v);
                const Complex z = detail::parse_complex(slv_in.z);
                const Complex eta = detail::parse_complex(slv_in.eta);
                json inputs{{"L", slv_in.L},
                            {"u", detail::cplx_list(u)},
                            {"v", detail::cplx_list(v)},
                            {"eta", detail::cplx(eta)}};
                Complex value;
                json diag = json::object();
                if (!slv_in.zs.empty()) {
                    const std::vector<Complex> zs =
                        detail::parse_complex_list(slv_in.zs);
                    detail::require_count("--zs", zs.size(), slv_in.L);
                    inputs["zs"] = detail::cplx_list(zs);
                    value = slavnov_restricted(slv_in.L, u, v, zs, eta);
                    diag["homogeneous"] = false;
                } else {
                    inputs["z"] = detail::cplx(z);
                    value = slavnov_hom(slv_in.L, u, v, z, eta);
                    diag["homogeneous"] = true;
                    diag["bethe_residual"] =
                        max_bethe_residual(u, slv_in.L, z, eta);
                }
                detail::Outcome o;
                o.doc = json{{"command", "slavnov"},
                             {"inputs", inputs},
                             {"result", {{"value", detail::cplx(value)}}},
                             {"diagnostics", diag}};
                return o;
            };
        } else if (gd_cmd->parsed()) {
            context = "gaudin";
            job = [&]() {
                const std::vector<Complex> u = detail::parse_complex_list(gd_in.u);
                const Complex z = detail::parse_complex(gd_in.z);
                const Complex eta = detail::parse_complex(gd_in.eta);
                const Complex value = gaudin_norm(gd_in.L, u, z, eta);
                detail::Outcome o;
                o.doc = json{{"command", "gaudin"},
                             {"inputs",
                              {{"L", gd_in.L},
                               {"u", detail::cplx_list(u)},
                               {"z", detail::cplx(z)},
                               {"eta", detail::cplx(eta)}}},
                             {"result", {{"value", detail::cplx(value)}}},
                             {"diagnostics",
                              {{"bethe_residual",
                                max_bethe_residual(u, gd_in.L, z, eta)}}}};
                return o;
            };
        } else if (be_cmd->parsed()) {
            context = "bethe";
            job = [&]() {
                const std::vector<int> modes = detail::parse_int_list(be_in.modes);
                const Complex z = detail::parse_complex(be_in.z);
                const Complex eta = detail::parse_complex(be_in.eta);
                detail::require_count("--modes", modes.size(), be_in.n);
                const BetheRoots sol =
                    solve_bethe(be_in.L, be_in.n, modes, z, eta, be_in.tol);
                detail::Outcome o;
                o.doc = json{{"command", "bethe"},
                             {"inputs",
                              {{"L", be_in.L},
                               {"N", be_in.n},
                               {"modes", modes},
                               {"z", detail::cplx(z)},
                               {"eta", detail::cplx(eta)},
                               {"tol", be_in.tol}}},
                             {"result",
                              {{"roots", detail::cplx_list(sol.roots)},
                               {"residual", sol.residual}}},
                             {"diagnostics", json::object()}};
                return o;
            };
        } else if (sc_cmd->parsed()) {
            context = "sc";
            job = [&]() {
                const std::vector<int> L = detail::parse_int_list(sc_in.lengths);
                const std::vector<int> N = detail::parse_int_list(sc_in.magnons);
                detail::require_count("--L", L.size(), 3);
                detail::require_count("--N", N.size(), 3);
                const std::array<std::vector<int>, 3> modes{
                    detail::parse_int_list(sc_in.modes1),
                    detail::parse_int_list(sc_in.modes2),
                    detail::parse_int_list(sc_in.modes3)};
                const std::array<const char*, 3> flag{"--modes-1", "--modes-2",
                                                      "--modes-3"};
                for (int k = 0; k < 3; ++k)
                    detail::require_count(flag[k], modes[k].size(), N[k]);
                const Complex z = detail::parse_complex(sc_in.z);
                const Complex eta = detail::parse_complex(sc_in.eta);
                const ThreePointGeometry g =
                    make_geometry(L[0], L[1], L[2], N[0], N[1], N[2]);
                std::array<BetheRoots, 3> sols{};
                for (int k = 0; k < 3; ++k)
                    sols[k] = solve_bethe(L[k], N[k], modes[k], z, eta);
                const StructureConstantResult r =
                    structure_constant(g, sols[0], sols[1], sols[2]);
                detail::Outcome o;
                o.doc = json{
                    {"command", "sc"},
                    {"inputs",
                     {{"L", L},
                      {"N", N},
                      {"modes_1", modes[0]},
                      {"modes_2", modes[1]},
                      {"modes_3", modes[2]},
                      {"z", detail::cplx(z)},
                      {"eta", detail::cplx(eta)}}},
                    {"result",
                     {{"c", detail::cplx(r.c)},
                      {"N123", detail::cplx(r.n123)},
                      {"Z", detail::cplx(r.dwpf)},
                      {"S", detail::cplx(r.slavnov)},
                      {"branch", "principal"},
                      {"residuals",
                       {r.residuals[0], r.residuals[1], r.residuals[2]}}}},
                    {"diagnostics",
                     {{"l12", g.l12},
                      {"l13", g.l13},
                      {"l23", g.l23},
                      {"norms",
                       {detail::cplx(r.norms[0]), detail::cplx(r.norms[1]),
                        detail::cplx(r.norms[2])}},
                      {"roots_1", detail::cplx_list(sols[0].roots)},
                      {"roots_2", detail::cplx_list(sols[1].roots)},
                      {"roots_3", detail::cplx_list(sols[2].roots)}}}};
                return o;
            };
        } else if (map_cmd->parsed()) {
            context = "map";
            job = [&]() {
                const OperatorWord word = parse_trace(map_in.word);
                const OperatorRole role = map_in.role == "O1"   ? OperatorRole::O1
                                          : map_in.role == "O2" ? OperatorRole::O2
                                                                : OperatorRole::O3;
                const Side side =
                    map_in.side == "initial" ? Side::Initial : Side::Final;
                const SpinBasisIndex b = word_to_basis(word, role, side);
                std::string bits(static_cast<std::size_t>(b.L), '0');
                for (int j = 0; j < b.L; ++j)
                    if (b.mask >> j & 1) bits[static_cast<std::size_t>(j)] = '1';
                detail::Outcome o;
                o.doc = json{{"command", "map"},
                             {"inputs",
                              {{"word", map_in.word},
                               {"role", map_in.role},
                               {"side", map_in.side}}},
                             {"result",
                              {{"L", b.L},
                               {"mask", b.mask},
                               {"bits", bits},
                               {"down_count", b.down_count()},
                               {"net_spin", b.net_spin()}}},
                             {"diagnostics", json::object()}};
                return o;
            };
        } else if (vf_cmd->parsed()) {
            context = "verify";
            job = [&]() {
                verify::VerifyOptions vo;
                vo.seed = seed;
                vo.max_n = vf_in.max_n;
                vo.trials = vf_in.trials;
                json inputs{{"suite", vf_in.suite},
                            {"seed", seed},
                            {"max_N", vf_in.max_n},
                            {"trials", vf_in.trials}};
                if (!vf_in.geometry.empty()) {
                    const std::vector<int> g = detail::parse_int_list(vf_in.geometry);
                    detail::require_count("--geometry", g.size(), 6);
                    vo.geometry = {g[0], g[1], g[2], g[3], g[4], g[5]};
                    inputs["geometry"] = g;
                }
                const std::vector<verify::CheckReport> reports =
                    verify::run_suite(vf_in.suite, vo);
                bool all_passed = true;
                json checks = json::array();
                for (const verify::CheckReport& r : reports) {
                    all_passed = all_passed && r.passed;
                    checks.push_back({{"name", r.name},
                                      {"passed", r.passed},
                                      {"max_dev", r.max_dev},
                                      {"tol", r.tol},
                                      {"detail", r.detail}});
                }
                detail::Outcome o;
                o.doc = json{{"command", "verify"},
                             {"inputs", inputs},
                             {"result", {{"passed", all_passed}, {"checks", checks}}},
                             {"diagnostics", json::object()}};
                o.code = all_passed ? 0 : 1;
                return o;
            };
        }

        const detail::Outcome first = job();
        const std::string text = detail::render(first.doc, format);
        if (check) {
            const detail::Outcome second = job();
            if (detail::render(second.doc, format) != text)
                throw Error("CheckMismatch",
                            "repeated run produced different output");
        }
        if (!out_path.empty()) {
            std::ofstream file(out_path);
            if (!file) throw InvalidInput("cannot open --out file " + out_path);
            file << text;
        } else {
            out << text;
        }
        return first.code;
    } catch (const UsageError& e) {
        err << detail::error_object(e.kind(), e.what(), context).dump(2) << "\n";
        return 2;
    } catch (const Error& e) {
        err << detail::error_object(e.kind(), e.what(), context).dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << detail::error_object("Internal", e.what(), context).dump(2) << "\n";
        return 1;
    }
}

}  // namespace sconst::cli
