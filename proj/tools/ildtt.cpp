// ildtt: batch driver for the checker, the equality engine, the corpus
// runner, and the finite-model evaluator.
//
//   ildtt check FILE...                     type-check every declaration
//   ildtt norm FILE --def NAME              print the canonical form of a body
//   ildtt eq FILE --left T --right T        decide an equality of closed terms
//   ildtt eval FILE --backend B --model M   denotation sizes and oracle verdicts
//   ildtt corpus [DIR]                      run DIR/manifest.txt
//
// Exit codes: 0 success, 1 failure, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "ildtt/backend_gf2.hpp"
#include "ildtt/backend_pset.hpp"
#include "ildtt/checker.hpp"
#include "ildtt/corpus.hpp"
#include "ildtt/fam.hpp"
#include "ildtt/printer.hpp"

using namespace ildtt;

namespace {

struct Args {
    std::string command;
    std::vector<std::string> files;
    std::string def, left, right, type;
    std::string backend, model;
    bool porcelain = false;
    bool have_ext = false, have_noeta = false;
    int ext_fuel = -1;
};

int usage(const char* msg = nullptr) {
    if (msg) std::fprintf(stderr, "ildtt: %s\n", msg);
    std::fprintf(stderr,
                 "usage: ildtt check FILE... [--porcelain]\n"
                 "       ildtt norm FILE --def NAME [--ext[=N]] [--no-eta]\n"
                 "       ildtt eq FILE --left TERM --right TERM [--type TY] [--ext[=N]] [--no-eta]\n"
                 "       ildtt eval FILE --backend {pset|gf2} --model CFG [--porcelain]\n"
                 "       ildtt corpus [DIR] [--porcelain]\n"
                 "exit codes: 0 ok, 1 failure, 2 usage; ILDTT_FUEL overrides default ext fuel\n");
    return 2;
}

bool parse_args(int argc, char** argv, Args& a) {
    if (argc < 2) return false;
    a.command = argv[1];
    for (int i = 2; i < argc; ++i) {
        std::string s = argv[i];
        auto next = [&](std::string& dst) {
            if (i + 1 >= argc) return false;
            dst = argv[++i];
            return true;
        };
        if (s == "--porcelain") a.porcelain = true;
        else if (s == "--def") { if (!next(a.def)) return false; }
        else if (s == "--left") { if (!next(a.left)) return false; }
        else if (s == "--right") { if (!next(a.right)) return false; }
        else if (s == "--type") { if (!next(a.type)) return false; }
        else if (s == "--backend") { if (!next(a.backend)) return false; }
        else if (s == "--model") { if (!next(a.model)) return false; }
        else if (s == "--eta") a.have_noeta = false;
        else if (s == "--no-eta") a.have_noeta = true;
        else if (s == "--ext") a.have_ext = true;
        else if (s.rfind("--ext=", 0) == 0) {
            a.have_ext = true;
            a.ext_fuel = std::atoi(s.c_str() + 6);
            if (a.ext_fuel < 1) return false;
        } else if (!s.empty() && s[0] == '-') return false;
        else a.files.push_back(s);
    }
    return true;
}

// ILDTT_FUEL overrides the default ext budget wherever a declaration (or flag)
// asked for expansion without pinning a count.
EqualityMode env_fuel(EqualityMode m) {
    if (const char* f = std::getenv("ILDTT_FUEL")) {
        int n = std::atoi(f);
        if (n >= 1 && m.fuel == EqualityMode::defaults().fuel) m.fuel = n;
    }
    return m;
}

EqualityMode flag_mode(const Args& a) {
    EqualityMode m = EqualityMode::defaults();
    if (a.have_ext) m = EqualityMode::ext(a.ext_fuel);
    if (a.have_noeta) m.eta_negative = false;
    return env_fuel(m);
}

std::string slurp(const std::string& path, bool& ok) {
    std::ifstream in(path);
    ok = bool(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Loaded {
    SourceModule mod;
    Signature sig;
};

Loaded load(const std::string& path) {
    bool ok = false;
    std::string src = slurp(path, ok);
    if (!ok) throw TypeError{{"cannot open " + path, {}, "", ""}};
    Parser p(src, path);
    Loaded l;
    l.mod = p.module();
    l.sig = p.signature();
    return l;
}

const Decl* find_decl(const SourceModule& mod, const std::string& name) {
    for (auto& d : mod.decls)
        if (d.name != "" && d.name == name) return &d;
    return nullptr;
}

// ---- check -----------------------------------------------------------------

struct FileReport {
    std::vector<std::string> lines;
    std::vector<std::string> diags;
    bool ok = true;
};

FileReport check_file(const std::string& path, bool porcelain) {
    FileReport rep;
    try {
        Loaded l = load(path);
        for (auto& d : l.mod.decls) {
            Decl dc = d;
            dc.mode = env_fuel(dc.mode);
            DirectiveResult r = run_directive(l.sig, dc);
            std::string mode = show_mode(d.mode);
            if (porcelain)
                rep.lines.push_back("check file=" + path + " name=" + d.name + " verdict=" +
                                    r.verdict + " mode=" + mode);
            else
                rep.lines.push_back(path + " ▸ " + d.name + " ▸ " + r.verdict +
                                    " ▸ " + mode);
            if (!r.ok) {
                rep.ok = false;
                rep.diags.push_back(path + ": " + d.name + ": " + r.err.str());
            }
        }
    } catch (const TypeError& e) {
        rep.ok = false;
        rep.diags.push_back(path + ": " + e.diag.str());
    }
    return rep;
}

int cmd_check(const Args& a) {
    if (a.files.empty()) return usage("check needs at least one file");
    std::vector<std::future<FileReport>> futs;
    for (auto& f : a.files)
        futs.push_back(std::async(a.files.size() > 1 ? std::launch::async : std::launch::deferred,
                                  check_file, f, a.porcelain));
    bool ok = true;
    for (auto& fu : futs) {
        FileReport rep = fu.get();
        for (auto& l : rep.lines) std::printf("%s\n", l.c_str());
        for (auto& d : rep.diags) std::fprintf(stderr, "%s\n", d.c_str());
        ok = ok && rep.ok;
    }
    return ok ? 0 : 1;
}

// ---- norm ------------------------------------------------------------------

int cmd_norm(const Args& a) {
    if (a.files.size() != 1 || a.def.empty()) return usage("norm needs FILE and --def NAME");
    try {
        Loaded l = load(a.files[0]);
        const Decl* d = find_decl(l.mod, a.def);
        if (!d) {
            std::fprintf(stderr, "ildtt: no declaration named '%s'\n", a.def.c_str());
            return 1;
        }
        if (d->kind != Decl::Def && d->kind != Decl::Check) {
            std::fprintf(stderr, "ildtt: '%s' has no body to normalize\n", a.def.c_str());
            return 1;
        }
        Decl dc = *d;
        dc.mode = env_fuel(a.have_ext || a.have_noeta ? flag_mode(a) : dc.mode);
        DirectiveResult r = run_directive(l.sig, dc);
        if (!r.ok) {
            std::fprintf(stderr, "%s: %s\n", a.files[0].c_str(), r.err.str().c_str());
            return 1;
        }
        TmP nf = normalize(l.sig, r.ctx, r.d1->term, dc.mode);
        std::printf("%s\n", print_tm(eta_contract(nf)).c_str());
        return 0;
    } catch (const TypeError& e) {
        std::fprintf(stderr, "%s\n", e.diag.str().c_str());
        return 1;
    }
}

// ---- eq --------------------------------------------------------------------

int cmd_eq(const Args& a) {
    if (a.files.size() != 1 || a.left.empty() || a.right.empty())
        return usage("eq needs FILE, --left and --right");
    try {
        Loaded l = load(a.files[0]);
        EqualityMode mode = flag_mode(a);
        Parser pl(a.left, "--left", &l.sig);
        TmP lhs = pl.standalone_term({});
        Parser pr(a.right, "--right", &l.sig);
        TmP rhs = pr.standalone_term({});
        Checker c(l.sig, mode);
        TyP ty;
        DerivP d1, d2;
        if (!a.type.empty()) {
            Parser pt(a.type, "--type", &l.sig);
            ty = c.check_type(pt.standalone_type({}));
            d1 = c.check_term(lhs, ty);
        } else {
            d1 = c.infer_term(lhs);
            ty = d1->ty;
        }
        Checker c2(l.sig, mode);
        d2 = c2.check_term(rhs, ty);
        Verdict v = equal_terms(l.sig, {}, d1->term, d2->term, ty, mode);
        std::printf("%s\n", v == Verdict::True ? "true" : v == Verdict::False ? "false"
                                                                              : "undecided");
        return v == Verdict::True ? 0 : 1;
    } catch (const TypeError& e) {
        std::fprintf(stderr, "%s\n", e.diag.str().c_str());
        return 1;
    }
}

// ---- eval ------------------------------------------------------------------

template <class B>
std::string show_env(const typename Fam<B>::Env& e) {
    std::string s;
    for (auto& en : e.ints) {
        if (!s.empty()) s += " ";
        s += en.name + "=" + B::show(en.pt);
    }
    return s.empty() ? "-" : s;
}

template <class B>
int eval_with(const Args& a, const Loaded& l, const ModelConfig& cfg) {
    Model<B> model = make_model<B>(l.sig, cfg);
    Fam<B> fam(model);
    const char* bk = B::name();
    bool bad = false;

    // the base families themselves, per index point
    for (auto& b : l.sig.bases) {
        Checker c(l.sig);
        DualContext dc;
        for (auto& e : b.tele) dc.intc.push_back(e);
        DualContext ec = c.check_context(dc);
        std::vector<TmP> args;
        for (auto& e : b.tele) args.push_back(mk_tm(TmFVar{Sort::Int, e.name}));
        TyP bt = mk_ty(TyBase{b.name, args});
        fam.each_env(ec.intc, [&](typename Fam<B>::Env& env) {
            typename B::Obj o = fam.ty(bt, env);
            if (a.porcelain)
                std::printf("eval backend=%s kind=base name=%s env=%s size=%d\n", bk,
                            b.name.c_str(), show_env<B>(env).c_str(), o.n);
            else
                std::printf("base %s [%s] ▸ %s\n", b.name.c_str(), show_env<B>(env).c_str(),
                            B::show(o).c_str());
        });
    }

    for (auto& d : l.mod.decls) {
        if (d.kind == Decl::Type || d.kind == Decl::Const) continue;
        DirectiveResult r = run_directive(l.sig, d);
        if (!r.ok) {
            std::printf("decl %s ▸ %s\n", d.name.c_str(), r.verdict.c_str());
            bad = true;
            continue;
        }
        if (d.kind == Decl::Def || d.kind == Decl::Check) {
            fam.each_env(r.ctx.intc, [&](typename Fam<B>::Env& env) {
                typename B::Obj o = fam.ty(r.ty, env);
                typename B::Obj u = fam.uses_obj(r.d1->uses, env);
                typename Fam<B>::Env e2 = env;
                typename B::Mor m = fam.tm(r.d1, e2);
                (void)m;
                if (a.porcelain)
                    std::printf("eval backend=%s kind=def name=%s env=%s type=%d uses=%d\n", bk,
                                d.name.c_str(), show_env<B>(env).c_str(), o.n, u.n);
                else
                    std::printf("decl %s [%s] ▸ type %s ▸ uses %s\n", d.name.c_str(),
                                show_env<B>(env).c_str(), B::show(o).c_str(), B::show(u).c_str());
            });
        } else if (d.kind == Decl::Eq) {
            bool agree = fam.denot_equal(r.ctx, r.d1, r.d2);
            if (a.porcelain)
                std::printf("eval backend=%s kind=eq name=%s verdict=%s denot=%s\n", bk,
                            d.name.c_str(), r.verdict.c_str(), agree ? "agree" : "differ");
            else
                std::printf("decl %s ▸ %s ▸ denotations %s\n", d.name.c_str(),
                            r.verdict.c_str(), agree ? "agree" : "differ");
            if ((r.eqv == Verdict::True) != agree) bad = true;
        } else if (d.kind == Decl::Iso) {
            bool iso = fam.iso_denot(r.ctx, r.ty, r.ty2, r.d1, r.d2);
            if (a.porcelain)
                std::printf("eval backend=%s kind=iso name=%s verdict=%s denot=%s\n", bk,
                            d.name.c_str(), r.verdict.c_str(), iso ? "iso" : "not-iso");
            else
                std::printf("decl %s ▸ %s ▸ denotations %s\n", d.name.c_str(),
                            r.verdict.c_str(), iso ? "mutually inverse" : "not an iso");
            if ((r.eqv == Verdict::True) != iso) bad = true;
        }
    }
    return bad ? 1 : 0;
}

int cmd_eval(const Args& a) {
    if (a.files.size() != 1 || a.backend.empty() || a.model.empty())
        return usage("eval needs FILE, --backend and --model");
    if (a.backend != "pset" && a.backend != "gf2") return usage("unknown backend");
    bool ok = false;
    std::string cfgsrc = slurp(a.model, ok);
    if (!ok) {
        std::fprintf(stderr, "ildtt: cannot open model config %s\n", a.model.c_str());
        return 1;
    }
    try {
        ModelConfig cfg = ModelConfig::parse(cfgsrc);
        if (!cfg.backend.empty() && cfg.backend != a.backend)
            return usage("model config names a different backend");
        Loaded l = load(a.files[0]);
        if (a.backend == "pset") return eval_with<PsetBackend>(a, l, cfg);
        return eval_with<Gf2Backend>(a, l, cfg);
    } catch (const ModelError& e) {
        std::fprintf(stderr, "ildtt: %s: %s\n", a.model.c_str(), e.message.c_str());
        return 1;
    } catch (const TypeError& e) {
        std::fprintf(stderr, "%s\n", e.diag.str().c_str());
        return 1;
    }
}

// ---- corpus ----------------------------------------------------------------

int cmd_corpus(const Args& a) {
    std::string dir = a.files.empty() ? "corpus" : a.files[0];
    Coverage cov;
    CorpusReport rep = run_corpus(dir, &cov);
    for (auto& l : corpus_report_lines(rep)) std::printf("%s\n", l.c_str());
    for (auto& e : rep.errors) std::fprintf(stderr, "corpus: %s\n", e.c_str());
    auto miss = cov.missing();
    std::printf("coverage: %zu/%zu rules", all_rules().size() - miss.size(), all_rules().size());
    for (auto& m : miss) std::printf(" -%s", m.c_str());
    std::printf("\n");
    return rep.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    Args a;
    if (!parse_args(argc, argv, a)) return usage();
    if (a.command == "check") return cmd_check(a);
    if (a.command == "norm") return cmd_norm(a);
    if (a.command == "eq") return cmd_eq(a);
    if (a.command == "eval") return cmd_eval(a);
    if (a.command == "corpus") return cmd_corpus(a);
    return usage(("unknown command '" + a.command + "'").c_str());
}
