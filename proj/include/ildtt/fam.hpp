// Families model: a type over Delta denotes a family of backend objects
// indexed by the points of Delta, and a derivation denotes, for each index,
// a backend morphism from the tensor of its consumed linear variables to its
// type.  Sigma and Pi are coproducts and products over the comprehension
// fiber Hom(I, A); ! is the coproduct of copies of I over the same fiber;
// Id picks the unit or the initial object depending on point equality.
//
// The interpreter is exact on every rule except dependent 2-E at a boolean
// point other than tt/ff, where no canonical branch exists and the zero
// morphism is used (both backends have zero objects, so this is available;
// no equation of the theory constrains those points).

#pragma once

#include <cassert>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "checker.hpp"
#include "printer.hpp"
#include "syntax.hpp"

namespace ildtt {

// ---------------------------------------------------------------------------
// Model configuration
// ---------------------------------------------------------------------------

struct ModelError {
    std::string message;
};

struct ModelConfig {
    std::string backend = "pset";  // pset | gf2
    unsigned seed = 1;
    std::map<std::string, int> base_size;    // uniform object size per base family
    std::map<std::string, int> const_choice; // point selector per constant

    static ModelConfig parse(const std::string& text) {
        ModelConfig c;
        std::istringstream in(text);
        std::string line;
        int ln = 0;
        while (std::getline(in, line)) {
            ++ln;
            auto h = line.find('#');
            if (h != std::string::npos) line.resize(h);
            h = line.find("--");
            if (h != std::string::npos) line.resize(h);
            std::istringstream ls(line);
            std::string key;
            if (!(ls >> key)) continue;
            auto bad = [&](const std::string& w) {
                throw ModelError{"model config line " + std::to_string(ln) + ": " + w};
            };
            if (key == "backend") {
                if (!(ls >> c.backend) || (c.backend != "pset" && c.backend != "gf2"))
                    bad("expected 'backend pset' or 'backend gf2'");
            } else if (key == "seed") {
                if (!(ls >> c.seed)) bad("expected 'seed N'");
            } else if (key == "base") {
                std::string n;
                int v;
                if (!(ls >> n >> v) || v < 0) bad("expected 'base NAME SIZE'");
                c.base_size[n] = v;
            } else if (key == "const") {
                std::string n;
                int v;
                if (!(ls >> n >> v) || v < 0) bad("expected 'const NAME K'");
                c.const_choice[n] = v;
            } else {
                bad("unknown directive '" + key + "'");
            }
        }
        return c;
    }
};

inline uint64_t fam_hash(const std::string& s, uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
    return h;
}

// ---------------------------------------------------------------------------
// Model assignment: base families to objects, constants to points
// ---------------------------------------------------------------------------

template <class B>
struct Model {
    const Signature* sig = nullptr;
    // (family name, index points) -> object
    std::function<typename B::Obj(const std::string&, const std::vector<typename B::Mor>&)> base_obj;
    // (constant name, telescope points, target object) -> point of the target
    std::function<typename B::Mor(const std::string&, const std::vector<typename B::Mor>&,
                                  const typename B::Obj&)> const_pt;
};

template <class B>
Model<B> make_model(const Signature& sig, const ModelConfig& cfg) {
    Model<B> m;
    m.sig = &sig;
    bool pset = std::string(B::name()) == "pset";
    m.base_obj = [cfg, pset](const std::string& name, const std::vector<typename B::Mor>& ix) {
        auto it = cfg.base_size.find(name);
        if (it != cfg.base_size.end()) return typename B::Obj{it->second};
        uint64_t h = fam_hash(name, fam_hash(std::to_string(cfg.seed)));
        for (auto& p : ix) h = fam_hash(B::show(p), h);
        return pset ? typename B::Obj{2 + (int)(h % 2)} : typename B::Obj{1 + (int)(h % 2)};
    };
    m.const_pt = [cfg](const std::string& name, const std::vector<typename B::Mor>& ix,
                       const typename B::Obj& cod) {
        auto pts = B::points(cod);
        assert(!pts.empty());
        uint64_t h;
        auto it = cfg.const_choice.find(name);
        if (it != cfg.const_choice.end()) {
            h = (uint64_t)it->second;
        } else {
            h = fam_hash(name, fam_hash(std::to_string(cfg.seed)));
            for (auto& p : ix) h = fam_hash(B::show(p), h);
        }
        return pts[h % pts.size()];
    };
    return m;
}

// ---------------------------------------------------------------------------
// Interpreter
// ---------------------------------------------------------------------------

template <class B>
class Fam {
public:
    using Obj = typename B::Obj;
    using Mor = typename B::Mor;

    struct Env {
        struct Entry {
            std::string name;
            TyP ty;
            Mor pt;
        };
        std::vector<Entry> ints;
        const Mor* find(const std::string& n) const {
            for (auto it = ints.rbegin(); it != ints.rend(); ++it)
                if (it->name == n) return &it->pt;
            return nullptr;
        }
    };

    explicit Fam(const Model<B>& m) : M(m) {}

    // -- types ---------------------------------------------------------------

    Obj ty(const TyP& t, const Env& e) {
        return std::visit(overloaded{
            [&](const TyBase& n) {
                std::vector<Mor> ix;
                for (auto& a : n.args) ix.push_back(point(a, e));
                return M.base_obj(n.name, ix);
            },
            [&](const TyUnit&) { return B::unit(); },
            [&](const TyTensor& n) { return B::tensor(ty(n.a, e), ty(n.b, e)); },
            [&](const TyLolli& n) { return B::hom(ty(n.a, e), ty(n.b, e)); },
            [&](const TyTop&) { return B::top(); },
            [&](const TyWith& n) { return B::prod({ty(n.a, e), ty(n.b, e)}); },
            [&](const TyZero&) { return B::zero(); },
            [&](const TyPlus& n) { return B::sum({ty(n.a, e), ty(n.b, e)}); },
            [&](const TyBang& n) {
                size_t k = B::points(ty(n.a, e)).size();
                return B::sum(std::vector<Obj>(k, B::unit()));
            },
            [&](const TySigma& n) { return B::sum(fiber_comps(n, e)); },
            [&](const TyPi& n) { return B::prod(fiber_comps(n, e)); },
            [&](const TyId& n) {
                return B::eq(point(n.lhs, e), point(n.rhs, e)) ? B::unit() : B::zero();
            },
            [&](const TyTwo&) { return B::sum({B::unit(), B::unit()}); },
        }, t->node);
    }

    // Component objects of a Sigma/Pi fiber, in point-enumeration order.
    std::vector<Obj> fiber_comps(const std::string& hint, const TyP& dom, const TyP& body,
                                 const Env& e) {
        Obj d = ty(dom, e);
        std::vector<Obj> cs;
        std::string x = "%" + hint;
        for (auto& p : B::points(d)) {
            Env e2 = e;
            e2.ints.push_back({x, dom, p});
            cs.push_back(ty(open_ty1(body, mk_tm(TmFVar{Sort::Int, x})), e2));
        }
        return cs;
    }
    std::vector<Obj> fiber_comps(const TySigma& n, const Env& e) {
        return fiber_comps(n.hint, n.dom, n.body, e);
    }
    std::vector<Obj> fiber_comps(const TyPi& n, const Env& e) {
        return fiber_comps(n.hint, n.dom, n.body, e);
    }

    // -- intuitionistic terms (embedded in types) ------------------------------

    Mor point(const TmP& t, const Env& e) {
        Checker ck(*M.sig);
        DualContext dc;
        for (auto& en : e.ints) dc.intc.push_back({en.name, en.ty});
        ck.check_context(dc);
        DerivP d = ck.infer_term(t);
        Env e2 = e;
        return tm(d, e2);
    }

    // -- derivations -----------------------------------------------------------

    Mor tm(const DerivP& d, Env& e) {
        const std::string& r = d->rule;
        if (r == "Lin-Var") return B::id(ty(d->uses[0].ty, e));
        if (r == "Int-Var") {
            const Mor* p = e.find(tm_as<TmFVar>(d->term)->name);
            assert(p);
            return *p;
        }
        if (r == "Const") {
            auto* c = tm_as<TmConst>(d->term);
            std::vector<Mor> ix;
            for (auto& k : d->kids) ix.push_back(tm(k, e));
            return M.const_pt(c->name, ix, ty(d->ty, e));
        }
        if (r == "Tm-Conv") {
            Mor m = tm(d->kids[0], e);
            assert(ty(d->ty, e) == m.cod);
            return m;
        }
        if (r == "I-I") return B::id(B::unit());
        if (r == "Top-I") return B::zero_mor(uses_obj(d->uses, e), B::top());
        if (r == "2-I1") return B::inj({B::unit(), B::unit()}, 0);
        if (r == "2-I2") return B::inj({B::unit(), B::unit()}, 1);
        if (r == "(x)-I") {
            Mor a = tm(d->kids[0], e), b = tm(d->kids[1], e);
            return B::compose(B::tensor_mor(a, b),
                              route(d->uses, {d->kids[0]->uses, d->kids[1]->uses}, e));
        }
        if (r == "Sg-I") {
            auto* sg = ty_as<TySigma>(d->ty);
            Mor pa = tm(d->kids[0], e);
            return B::compose(B::inj(fiber_comps(*sg, e), point_index(ty(sg->dom, e), pa)),
                              tm(d->kids[1], e));
        }
        if (r == "!-I") {
            Mor pa = tm(d->kids[0], e);
            Obj a = pa.cod;
            size_t k = B::points(a).size();
            return B::inj(std::vector<Obj>(k, B::unit()), point_index(a, pa));
        }
        if (r == "-o-I") {
            Mor body = tm(d->kids[0], e);
            auto& us = d->kids[0]->uses;
            assert(!us.empty() && us.back().id == d->bound[0]);
            Obj a = ty(us.back().ty, e);
            std::vector<LinUse> amb(us.begin(), us.end() - 1);
            return B::curry(body, uses_obj(amb, e), a, body.cod);
        }
        if (r == "Pi-I") {
            auto* lam = tm_as<TmPiLam>(d->term);
            std::vector<Obj> cs;
            std::vector<Mor> fs;
            for (auto& p : B::points(ty(lam->dom, e))) {
                Env e2 = e;
                e2.ints.push_back({d->opened[0], lam->dom, p});
                Mor m = tm(d->kids[0], e2);
                cs.push_back(m.cod);
                fs.push_back(m);
            }
            return B::tuple(cs, fs);
        }
        if (r == "-o-E") {
            auto* lo = ty_as<TyLolli>(d->kids[0]->ty);
            Obj a = ty(lo->a, e), b = ty(lo->b, e);
            Mor f = tm(d->kids[0], e), x = tm(d->kids[1], e);
            return B::compose(B::eval_mor(a, b),
                              B::compose(B::tensor_mor(f, x),
                                         route(d->uses, {d->kids[0]->uses, d->kids[1]->uses}, e)));
        }
        if (r == "Pi-E") {
            auto* pi = ty_as<TyPi>(d->kids[0]->ty);
            Mor pa = tm(d->kids[1], e);
            return B::compose(B::proj(fiber_comps(*pi, e), point_index(ty(pi->dom, e), pa)),
                              tm(d->kids[0], e));
        }
        if (r == "&-I") {
            Mor a = tm(d->kids[0], e), b = tm(d->kids[1], e);
            return B::tuple({a.cod, b.cod}, {a, b});
        }
        if (r == "&-E1" || r == "&-E2") {
            auto* w = ty_as<TyWith>(d->kids[0]->ty);
            Mor m = tm(d->kids[0], e);
            return B::compose(B::proj({ty(w->a, e), ty(w->b, e)}, r == "&-E1" ? 0 : 1), m);
        }
        if (r == "(+)-I1" || r == "(+)-I2") {
            auto* pl = ty_as<TyPlus>(d->ty);
            Mor m = tm(d->kids[0], e);
            return B::compose(B::inj({ty(pl->a, e), ty(pl->b, e)}, r == "(+)-I1" ? 0 : 1), m);
        }
        if (r == "(+)-E") {
            auto* pl = ty_as<TyPlus>(d->kids[0]->ty);
            Obj a = ty(pl->a, e), b = ty(pl->b, e);
            Mor s = tm(d->kids[0], e), l = tm(d->kids[1], e), rr = tm(d->kids[2], e);
            std::vector<LinUse> amb = minus(d->kids[1]->uses, d->bound[0]);
            Obj x = uses_obj(amb, e);
            Mor m = B::compose(B::tensor_mor(ident(amb, e), s), route(d->uses, {amb, d->kids[0]->uses}, e));
            m = B::compose(B::dist(x, {a, b}), m);
            return B::compose(B::cotuple({B::tensor(x, a), B::tensor(x, b)}, {l, rr}), m);
        }
        if (r == "I-E") {
            Mor s = tm(d->kids[0], e), body = tm(d->kids[1], e);
            auto& ub = d->kids[1]->uses;
            Mor m = B::compose(B::tensor_mor(ident(ub, e), s), route(d->uses, {ub, d->kids[0]->uses}, e));
            return B::compose(body, m);
        }
        if (r == "(x)-E") {
            Mor s = tm(d->kids[0], e), body = tm(d->kids[1], e);
            std::vector<LinUse> amb = minus(minus(d->kids[1]->uses, d->bound[0]), d->bound[1]);
            Mor m = B::compose(B::tensor_mor(ident(amb, e), s), route(d->uses, {amb, d->kids[0]->uses}, e));
            return B::compose(body, m);
        }
        if (r == "Sg-E" || r == "!-E") {
            bool bang = r == "!-E";
            Mor s = tm(d->kids[0], e);
            TyP domty;
            TyP bodyslot;  // null for !-E
            if (bang) {
                domty = ty_as<TyBang>(d->kids[0]->ty)->a;
            } else {
                auto* sg = ty_as<TySigma>(d->kids[0]->ty);
                domty = sg->dom;
                bodyslot = sg->body;
            }
            std::vector<LinUse> amb = d->kids[1]->uses;
            if (!bang) amb = minus(amb, d->bound[0]);
            Obj x = uses_obj(amb, e);
            std::vector<Obj> cs;
            std::vector<Mor> fs;
            for (auto& p : B::points(ty(domty, e))) {
                Env e2 = e;
                e2.ints.push_back({d->opened[0], domty, p});
                Mor mp = tm(d->kids[1], e2);
                cs.push_back(bang ? B::unit()
                                  : ty(open_ty1(bodyslot, mk_tm(TmFVar{Sort::Int, d->opened[0]})), e2));
                fs.push_back(mp);
            }
            Mor m = B::compose(B::tensor_mor(ident(amb, e), s), route(d->uses, {amb, d->kids[0]->uses}, e));
            m = B::compose(B::dist(x, cs), m);
            std::vector<Obj> tcs;
            for (auto& c : cs) tcs.push_back(B::tensor(x, c));
            return B::compose(B::cotuple(tcs, fs), m);
        }
        if (r == "0-E") return B::zero_mor(uses_obj(d->uses, e), ty(d->ty, e));
        if (r == "2-E") {
            auto* n = tm_as<TmIf>(d->term);
            Mor s = tm(d->kids[0], e);
            bool dep = n->motive && uses_bvar_ty(n->motive, 0, 0);
            if (!dep) {
                Mor t = tm(d->kids[1], e), f = tm(d->kids[2], e);
                auto& u = d->kids[1]->uses;
                Obj x = uses_obj(u, e);
                Mor m = B::tensor_mor(ident(u, e), s);  // X = X(x)I -> X(x)2
                m = B::compose(B::dist(x, {B::unit(), B::unit()}), m);
                return B::compose(B::cotuple({x, x}, {t, f}), m);
            }
            if (B::eq(s, B::inj({B::unit(), B::unit()}, 0))) return tm(d->kids[1], e);
            if (B::eq(s, B::inj({B::unit(), B::unit()}, 1))) return tm(d->kids[2], e);
            return B::zero_mor(uses_obj(d->uses, e), ty(d->ty, e));
        }
        if (r == "Id-I") {
            assert(ty(d->ty, e) == B::unit());
            return B::id(B::unit());
        }
        if (r == "Id-E") {
            Mor pa = tm(d->kids[0], e), pa2 = tm(d->kids[1], e);
            if (!B::eq(pa, pa2)) return B::zero_mor(uses_obj(d->uses, e), ty(d->ty, e));
            auto* n = tm_as<TmIdElim>(d->term);
            Mor p = tm(d->kids[2], e);
            std::vector<LinUse> tele;  // in telescope order
            for (auto& te : n->tele) {
                for (auto& u : d->uses)
                    if (u.name == te.var && !contains(d->kids[2]->uses, u.id) &&
                        !contains(tele, u.id))
                        tele.push_back(u);
            }
            Env e2 = e;
            e2.ints.push_back({d->opened[0], d->kids[0]->ty, pa});
            Mor br = tm(d->kids[3], e2);
            Mor m = B::compose(B::tensor_mor(ident(tele, e), p),
                               route(d->uses, {tele, d->kids[2]->uses}, e));
            return B::compose(br, m);
        }
        assert(false && "tm: unhandled rule");
        return B::id(B::unit());
    }

    // -- context enumeration ----------------------------------------------------

    // Calls f once per point of the intuitionistic context set.
    template <class F>
    void each_env(const std::vector<CtxEntry>& intc, F f, size_t limit = 4096) {
        Env e;
        count_ = 0;
        rec_env(intc, 0, e, f, limit);
    }

    long ctx_size(const std::vector<CtxEntry>& intc) {
        long n = 0;
        each_env(intc, [&](Env&) { ++n; });
        return n;
    }

    // Root morphism of a directive derivation at a given index point.
    Mor root(const DerivP& d, Env& e) { return tm(d, e); }

    bool denot_equal(const DualContext& ctx, const DerivP& d1, const DerivP& d2) {
        bool ok = true;
        each_env(ctx.intc, [&](Env& e) {
            if (!ok) return;
            if (!B::eq(tm(d1, e), tm(d2, e))) ok = false;
        });
        return ok;
    }

    // fwd: x:A |- f : B and bwd: y:B |- g : A; true iff both composites are
    // identities at every index point.
    bool iso_denot(const DualContext& ctx, const TyP& A, const TyP& Bt, const DerivP& fwd,
                   const DerivP& bwd) {
        bool ok = true;
        each_env(ctx.intc, [&](Env& e) {
            if (!ok) return;
            Mor f = tm(fwd, e), g = tm(bwd, e);
            if (!B::eq(B::compose(g, f), B::id(ty(A, e))) ||
                !B::eq(B::compose(f, g), B::id(ty(Bt, e))))
                ok = false;
        });
        return ok;
    }

    Obj uses_obj(const std::vector<LinUse>& us, const Env& e) {
        Obj o = B::unit();
        for (auto& u : us) o = B::tensor(o, ty(u.ty, e));
        return o;
    }

private:
    const Model<B>& M;
    size_t count_ = 0;

    template <class F>
    void rec_env(const std::vector<CtxEntry>& intc, size_t i, Env& e, F& f, size_t limit) {
        if (i == intc.size()) {
            if (++count_ > limit) throw ModelError{"model: context enumeration exceeds limit"};
            f(e);
            return;
        }
        for (auto& p : B::points(ty(intc[i].ty, e))) {
            e.ints.push_back({intc[i].name, intc[i].ty, p});
            rec_env(intc, i + 1, e, f, limit);
            e.ints.pop_back();
        }
    }

    int point_index(const Obj& a, const Mor& p) {
        auto pts = B::points(a);
        for (size_t i = 0; i < pts.size(); ++i)
            if (B::eq(pts[i], p)) return (int)i;
        assert(false && "point not found");
        return 0;
    }

    static std::vector<LinUse> minus(std::vector<LinUse> us, long id) {
        std::vector<LinUse> out;
        for (auto& u : us)
            if (u.id != id) out.push_back(u);
        return out;
    }
    static bool contains(const std::vector<LinUse>& us, long id) {
        for (auto& u : us)
            if (u.id == id) return true;
        return false;
    }

    Mor ident(const std::vector<LinUse>& us, const Env& e) { return B::id(uses_obj(us, e)); }

    // Permutation from the tensor of `from` (its own order) to the
    // concatenation of the groups (each a sublist of `from`).
    Mor route(const std::vector<LinUse>& from, const std::vector<std::vector<LinUse>>& groups,
              const Env& e) {
        std::vector<Obj> fs;
        for (auto& u : from) fs.push_back(ty(u.ty, e));
        std::vector<int> order;
        for (auto& g : groups)
            for (auto& u : g) {
                int pos = -1;
                for (size_t i = 0; i < from.size(); ++i)
                    if (from[i].id == u.id) pos = (int)i;
                assert(pos >= 0);
                order.push_back(pos);
            }
        assert(order.size() == from.size());
        return B::perm(fs, order);
    }
};

}  // namespace ildtt
