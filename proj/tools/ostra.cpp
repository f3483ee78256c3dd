#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ostra/pipeline.hpp"
#include "ostra/presets.hpp"
#include "ostra/satmin.hpp"

using namespace ostra;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMismatch = 2;
constexpr int kExitSolver = 3;

uint64_t fnv1a(const std::string& text) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string digit_string(const QuadraticIrrational& alpha, int base, int count) {
    std::string s;
    for (int n = 0; n < count; ++n) {
        int d = fractional_digit(n, base, alpha);
        if (d > 9) throw std::runtime_error("digits: base > 10 has no character form");
        s += char('0' + d);
    }
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

struct AlphaBase {
    QuadraticIrrational alpha;
    int base;
};

AlphaBase resolve_target(const std::string& preset_name, const std::string& alpha_text,
                         int base) {
    if (!preset_name.empty()) {
        const PresetConfig* p = find_preset(preset_name);
        if (!p) throw std::runtime_error("unknown preset: " + preset_name);
        return {QuadraticIrrational::parse(p->alpha_text), p->base};
    }
    if (alpha_text.empty()) throw std::runtime_error("need --preset or --alpha");
    if (base < 2) throw std::runtime_error("need --base >= 2");
    return {QuadraticIrrational::parse(alpha_text), base};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"automata for the base-b digits of quadratic irrationals"};
    app.require_subcommand(1);

    // digits
    std::string d_alpha;
    int d_base = 2, d_count = 16;
    bool d_via_automaton = false;
    auto* digits_cmd = app.add_subcommand("digits", "print base-b digits of alpha");
    digits_cmd->add_option("alpha", d_alpha)->required();
    digits_cmd->add_option("base", d_base)->required();
    digits_cmd->add_option("count", d_count)->required();
    digits_cmd->add_flag("--via-automaton", d_via_automaton,
                         "compute through the digit DFAO instead of the oracle");

    // encode / decode
    std::string c_system = "fib", c_value;
    auto* encode_cmd = app.add_subcommand("encode", "encode an integer");
    encode_cmd->add_option("--system", c_system);
    encode_cmd->add_option("value", c_value)->required();
    std::string dec_system = "fib", dec_digits;
    auto* decode_cmd = app.add_subcommand("decode", "decode a representation");
    decode_cmd->add_option("--system", dec_system);
    decode_cmd->add_option("digits", dec_digits)->required();

    // build
    std::string b_preset, b_alpha, b_out;
    int b_base = 0;
    bool b_validity = false;
    std::string b_system;
    auto* build_cmd = app.add_subcommand("build", "build and save an automaton");
    build_cmd->add_option("--preset", b_preset);
    build_cmd->add_option("--alpha", b_alpha);
    build_cmd->add_option("--base", b_base);
    build_cmd->add_option("--out", b_out);
    build_cmd->add_flag("--validity", b_validity,
                        "emit the numeration system's base DFA instead");
    build_cmd->add_option("--system", b_system,
                          "system for --validity (fib|pell|ost:[...])");

    // run
    std::string r_path, r_input;
    auto* run_cmd = app.add_subcommand("run", "run an automaton on a digit string");
    run_cmd->add_option("automaton", r_path)->required();
    run_cmd->add_option("input", r_input)->required();

    // verify
    std::string v_path, v_preset, v_alpha;
    int v_base = 0;
    unsigned long v_nmax = 10000;
    auto* verify_cmd = app.add_subcommand("verify", "check an automaton against the oracle");
    verify_cmd->add_option("automaton", v_path)->required();
    verify_cmd->add_option("--preset", v_preset);
    verify_cmd->add_option("--alpha", v_alpha);
    verify_cmd->add_option("--base", v_base);
    verify_cmd->add_option("--n-max", v_nmax);

    // satmin
    std::string s_preset, s_solver;
    int s_kstart = 1, s_ktarget = 0, s_dsstart = 1, s_dsstep = 1;
    unsigned long s_nverify = 10000;
    bool s_enumerate = false, s_block_base = false, s_no_bfs = false,
         s_lax_loops = false, s_no_witness = false;
    auto* satmin_cmd = app.add_subcommand("satmin", "SAT minimality ladder");
    satmin_cmd->add_option("--preset", s_preset)->required();
    satmin_cmd->add_option("--solver", s_solver, "external solver binary");
    satmin_cmd->add_option("--k-start", s_kstart);
    satmin_cmd->add_option("--k-target", s_ktarget);
    satmin_cmd->add_option("--ds-start", s_dsstart);
    satmin_cmd->add_option("--ds-step", s_dsstep);
    satmin_cmd->add_option("--n-verify", s_nverify);
    satmin_cmd->add_flag("--enumerate", s_enumerate);
    satmin_cmd->add_flag("--block-base-vars", s_block_base);
    satmin_cmd->add_flag("--no-bfs-symmetry", s_no_bfs);
    satmin_cmd->add_flag("--lax-self-loops", s_lax_loops);
    satmin_cmd->add_flag("--no-output-witness", s_no_witness);

    // export-dot
    std::string e_path, e_prefix;
    auto* export_cmd = app.add_subcommand("export-dot", "print DOT for an automaton");
    export_cmd->add_option("automaton", e_path)->required();
    export_cmd->add_option("--state-prefix", e_prefix);

    auto* presets_cmd = app.add_subcommand("presets", "list named configurations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (digits_cmd->parsed()) {
            QuadraticIrrational alpha = QuadraticIrrational::parse(d_alpha);
            if (!alpha.positive()) throw std::runtime_error("alpha must be positive");
            Int ip = beatty_floor(1, alpha);
            std::string frac;
            if (d_via_automaton) {
                BetaLinkage link = derive_beta(alpha);
                DigitAutomatonBundle bundle = build_digit_dfao(link, d_base);
                for (int n = 0; n < d_count; ++n)
                    frac += char('0' + eval_digit(bundle, n));
            } else {
                frac = digit_string(alpha, d_base, d_count);
            }
            std::cout << ip.get_str() << "." << frac << "\n";
            return kExitOk;
        }
        if (encode_cmd->parsed()) {
            NumerationSystem sys = NumerationSystem::parse(c_system);
            std::cout << sys.encode(Int(c_value)).str() << "\n";
            return kExitOk;
        }
        if (decode_cmd->parsed()) {
            NumerationSystem sys = NumerationSystem::parse(dec_system);
            Representation rep = Representation::parse(dec_digits);
            std::cout << sys.decode(rep).get_str() << "\n";
            return kExitOk;
        }
        if (build_cmd->parsed()) {
            if (b_validity) {
                if (b_system.empty()) throw std::runtime_error("--validity needs --system");
                Dfao base = NumerationSystem::parse(b_system).validity_dfa();
                std::string text = base.to_text();
                if (!b_out.empty()) write_file(b_out, text);
                else std::cout << text;
                std::cerr << "states: " << base.state_count() << "\n";
                return kExitOk;
            }
            AlphaBase target = resolve_target(b_preset, b_alpha, b_base);
            BetaLinkage link = derive_beta(target.alpha);
            DigitAutomatonBundle bundle = build_digit_dfao(link, target.base);
            std::string text = bundle.combined.to_text();
            std::cout << "states: " << bundle.combined.state_count() << "\n";
            if (!b_out.empty()) {
                write_file(b_out, text);
                nlohmann::json manifest{
                    {"system", link.system.str()},
                    {"alpha", target.alpha.str()},
                    {"base", target.base},
                    {"states", bundle.combined.state_count()},
                    {"hash", fnv1a(text)},
                };
                write_file(b_out + ".manifest.json", manifest.dump(2) + "\n");
            }
            return kExitOk;
        }
        if (run_cmd->parsed()) {
            Dfao a = Dfao::from_text(read_file(r_path));
            Representation rep = Representation::parse(r_input);
            auto out = a.run(rep.digits);
            if (!out) {
                std::cerr << "error: invalid representation (no output)\n";
                return kExitMismatch;
            }
            std::cout << *out << "\n";
            return kExitOk;
        }
        if (verify_cmd->parsed()) {
            AlphaBase target = resolve_target(v_preset, v_alpha, v_base);
            Dfao a = Dfao::from_text(read_file(v_path));
            BetaLinkage link = derive_beta(target.alpha);
            auto fail = verify_candidate(a, link, target.base, v_nmax);
            if (fail) {
                std::cout << "FAIL at n=" << *fail << "\n";
                return kExitMismatch;
            }
            std::cout << "PASS " << v_nmax << " digits\n";
            return kExitOk;
        }
        if (satmin_cmd->parsed()) {
            const PresetConfig* p = find_preset(s_preset);
            if (!p) throw std::runtime_error("unknown preset: " + s_preset);
            BetaLinkage link = derive_beta(QuadraticIrrational::parse(p->alpha_text));
            LadderOptions opts;
            opts.k_start = s_kstart;
            opts.k_target = s_ktarget > 0
                                ? s_ktarget
                                : (p->expected_states ? *p->expected_states : 0);
            opts.ds_start = s_dsstart;
            opts.ds_step = s_dsstep;
            opts.n_verify = s_nverify;
            opts.enumerate_at_target = s_enumerate;
            opts.block_base_vars = s_block_base;
            opts.encode_opts.bfs_symmetry = !s_no_bfs;
            opts.encode_opts.lax_self_loops = s_lax_loops;
            opts.encode_opts.output_witness = !s_no_witness;
            opts.solver.external_path = s_solver;
            LadderResult result = run_ladder(link, p->base, opts);
            std::cout << "k\tdigit set\tstatus\tverified\tenumerated\tcandidates\n";
            for (const LadderRow& row : result.rows) {
                std::cout << row.k << "\t" << row.digit_set << "\t"
                          << (row.sat ? "SAT" : "UNSAT") << "\t"
                          << (row.sat ? (row.verified ? "yes" : "no") : "-") << "\t";
                if (row.enumerated >= 0) std::cout << row.enumerated;
                else std::cout << "-";
                std::cout << "\t";
                if (row.candidates >= 0) std::cout << row.candidates;
                else std::cout << "-";
                std::cout << "\n";
            }
            return kExitOk;
        }
        if (export_cmd->parsed()) {
            Dfao a = Dfao::from_text(read_file(e_path));
            std::cout << a.to_dot({e_prefix});
            return kExitOk;
        }
        if (presets_cmd->parsed()) {
            for (const PresetConfig& p : presets()) {
                std::cout << p.name << "\t" << p.alpha_text << "\tbase " << p.base;
                if (p.expected_states) std::cout << "\tstates " << *p.expected_states;
                std::cout << "\n";
            }
            return kExitOk;
        }
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return std::string(e.what()).find("solver") != std::string::npos ? kExitSolver
                                                                         : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
