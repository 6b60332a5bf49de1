#pragma once
// equality.hpp -- definitional equality for ILDTT terms and types.
//
// Strategy: normalize both sides (computation rules plus oriented commuting
// conversions plus a deterministic reordering of adjacent independent lets),
// then compare structurally with type-directed eta for the negative formers
// (-o, Pi, &, Top).  Uniqueness rules for the positive formers are not applied
// by default; in ext mode the engine runs bounded rounds of simultaneous
// U-expansions at neutral occurrences of positive type and renormalizes.
//
// Verdicts: True and False are definite; Undecided is returned when neither
// direction can be established within the configured budgets.
//
// All terms handled here are locally closed: free variables are named, bound
// variables never dangle.  The normalizer keeps that invariant by opening
// every binder with a fresh free variable and closing it again afterwards.
// Motives and type annotations are ignored by the comparator (they are
// typing bookkeeping, not computational content), which lets the commuting
// conversions float eliminators without re-deriving every annotation.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rules.hpp"
#include "surface.hpp"

namespace ildtt {

enum class Verdict { True, False, Undecided };

inline const char* verdict_str(Verdict v) {
    switch (v) {
        case Verdict::True: return "true";
        case Verdict::False: return "false";
        default: return "undecided";
    }
}

class EqEngine {
public:
    EqEngine(const Signature* sig, DualContext ctx, EqualityMode mode, Coverage* cov = nullptr)
        : sig_(sig), ctx_(std::move(ctx)), mode_(mode), cov_(cov) {}

    // Decide a == b : ty.  ty may be null when unknown (eta and Top-U are then
    // only available where annotations or spine types recover it).
    Verdict term_eq(const TmP& a, const TmP& b, const TyP& ty) {
        if (alpha_eq(a, b)) {
            mark("Eq-R");
            return Verdict::True;
        }
        TmP na = norm(a), nb = norm(b);
        if (!alpha_eq(na, a)) mark("Eq-T");
        if (!alpha_eq(nb, b)) { mark("Eq-S"); mark("Eq-T"); }
        if (cmp(na, nb, ty)) return Verdict::True;
        if (!mode_.ext_positive) {
            if (gave_up_) return Verdict::Undecided;
            return distinct(na, nb, ty) ? Verdict::False : Verdict::Undecided;
        }
        for (int round = 0; round < mode_.fuel; ++round) {
            TmP ea = norm(expand(na));
            TmP eb = norm(expand(nb));
            if (cmp(ea, eb, ty)) return Verdict::True;
            bool fixed = alpha_eq(ea, na) && alpha_eq(eb, nb);
            na = ea;
            nb = eb;
            if (gave_up_) return Verdict::Undecided;
            if (fixed) return Verdict::False;  // saturated with no match
        }
        return Verdict::Undecided;
    }

    Verdict type_eq(const TyP& a, const TyP& b) {
        if (!a || !b) return (!a && !b) ? Verdict::True : Verdict::Undecided;
        if (alpha_eq_ty(a, b)) {
            mark("Eq-R");
            return Verdict::True;
        }
        if (a->node.index() != b->node.index()) return Verdict::False;
        Span sp;
        auto comb = [](Verdict x, Verdict y) {
            if (x == Verdict::False || y == Verdict::False) return Verdict::False;
            if (x == Verdict::Undecided || y == Verdict::Undecided) return Verdict::Undecided;
            return Verdict::True;
        };
        return std::visit(overloaded{
            [&](const TyBase& x) -> Verdict {
                auto& y = std::get<TyBase>(b->node);
                if (x.name != y.name || x.args.size() != y.args.size()) return Verdict::False;
                Verdict v = Verdict::True;
                const BaseDecl* bd = sig_ ? sig_->find_base(x.name) : nullptr;
                for (size_t i = 0; i < x.args.size(); ++i) {
                    TyP argty = nullptr;
                    if (bd && i < bd->tele.size()) {
                        argty = bd->tele[i].ty;
                        for (size_t j = 0; j < i; ++j)
                            argty = subst_int_ty(argty, bd->tele[j].name, x.args[j]);
                    }
                    v = comb(v, term_eq(x.args[i], y.args[i], argty));
                }
                return v;
            },
            [&](const TyUnit&) -> Verdict { return Verdict::True; },
            [&](const TyTensor& x) -> Verdict {
                auto& y = std::get<TyTensor>(b->node);
                return comb(type_eq(x.a, y.a), type_eq(x.b, y.b));
            },
            [&](const TyLolli& x) -> Verdict {
                auto& y = std::get<TyLolli>(b->node);
                return comb(type_eq(x.a, y.a), type_eq(x.b, y.b));
            },
            [&](const TyTop&) -> Verdict { return Verdict::True; },
            [&](const TyWith& x) -> Verdict {
                auto& y = std::get<TyWith>(b->node);
                return comb(type_eq(x.a, y.a), type_eq(x.b, y.b));
            },
            [&](const TyZero&) -> Verdict { return Verdict::True; },
            [&](const TyPlus& x) -> Verdict {
                auto& y = std::get<TyPlus>(b->node);
                return comb(type_eq(x.a, y.a), type_eq(x.b, y.b));
            },
            [&](const TyBang& x) -> Verdict {
                return type_eq(x.a, std::get<TyBang>(b->node).a);
            },
            [&](const TySigma& x) -> Verdict {
                auto& y = std::get<TySigma>(b->node);
                Verdict v = type_eq(x.dom, y.dom);
                TmP f = fresh_var(Sort::Int, x.hint, x.dom);
                return comb(v, type_eq(open_ty1(x.body, f), open_ty1(y.body, f)));
            },
            [&](const TyPi& x) -> Verdict {
                auto& y = std::get<TyPi>(b->node);
                Verdict v = type_eq(x.dom, y.dom);
                TmP f = fresh_var(Sort::Int, x.hint, x.dom);
                return comb(v, type_eq(open_ty1(x.body, f), open_ty1(y.body, f)));
            },
            [&](const TyId& x) -> Verdict {
                auto& y = std::get<TyId>(b->node);
                Verdict v = type_eq(x.a, y.a);
                v = comb(v, term_eq(x.lhs, y.lhs, x.a));
                return comb(v, term_eq(x.rhs, y.rhs, x.a));
            },
            [&](const TyTwo&) -> Verdict { return Verdict::True; },
        }, a->node);
    }

    TmP normal_form(const TmP& t) { return norm(t); }
    bool gave_up() const { return gave_up_; }
    long steps_taken() const { return start_budget_ - budget_; }

private:
    const Signature* sig_;
    DualContext ctx_;
    EqualityMode mode_;
    Coverage* cov_;
    long start_budget_ = 200000;
    long budget_ = 200000;
    bool gave_up_ = false;
    long freshn_ = 0;
    std::map<std::string, TyP> locals_;  // opened binder variable -> type (may be null)
    TmP idu_refl_, idu_rhs_, idu_proof_; // active Id-U match, if any

    void mark(const char* r) {
        if (cov_) cov_->mark(r);
    }

    TmP fresh_var(Sort s, const std::string& hint, const TyP& ty) {
        std::string n = "%" + (hint.empty() ? std::string("v") : hint) + std::to_string(++freshn_);
        locals_[n] = ty;
        return fvar(s, n);
    }

    TyP local_type(const std::string& name, Sort sort) const {
        auto it = locals_.find(name);
        if (it != locals_.end()) return it->second;
        if (sort == Sort::Lin) {
            if (const TyP* e = ctx_.lookup_lin(name)) return *e;
        } else {
            if (const TyP* e = ctx_.lookup_int(name)) return *e;
        }
        return nullptr;
    }

    bool spend(long n = 1) {
        budget_ -= n;
        if (budget_ < 0) {
            gave_up_ = true;
            return false;
        }
        return true;
    }

    // -- spine typing ---------------------------------------------------------

    TyP spine_type(const TmP& t) {
        if (!t) return nullptr;
        if (const TmFVar* v = tm_as<TmFVar>(t)) return local_type(v->name, v->sort);
        if (const TmConst* c = tm_as<TmConst>(t)) {
            if (!sig_) return nullptr;
            const ConstDecl* cd = sig_->find_const(c->name);
            if (!cd || cd->tele.size() != c->args.size()) return nullptr;
            return instantiate_tele(cd->tele, cd->ty, c->args);
        }
        if (const TmApp* ap = tm_as<TmApp>(t)) {
            TyP f = spine_type(ap->f);
            if (!f) return nullptr;
            if (const TyLolli* l = ty_as<TyLolli>(f)) return l->b;
            if (const TyPi* p = ty_as<TyPi>(f)) {
                if (const TmBang* bg = tm_as<TmBang>(ap->a)) return open_ty1(p->body, bg->a);
            }
            return nullptr;
        }
        if (const TmPiApp* ap = tm_as<TmPiApp>(t)) {
            TyP f = spine_type(ap->f);
            if (const TyPi* p = f ? ty_as<TyPi>(f) : nullptr) return open_ty1(p->body, ap->a);
            return nullptr;
        }
        if (const TmFst* x = tm_as<TmFst>(t)) {
            TyP s = spine_type(x->t);
            if (const TyWith* w = s ? ty_as<TyWith>(s) : nullptr) return w->a;
            return nullptr;
        }
        if (const TmSnd* x = tm_as<TmSnd>(t)) {
            TyP s = spine_type(x->t);
            if (const TyWith* w = s ? ty_as<TyWith>(s) : nullptr) return w->b;
            return nullptr;
        }
        return nullptr;
    }

    static bool is_spine(const TmP& t) {
        if (tm_as<TmFVar>(t) || tm_as<TmConst>(t)) return true;
        if (const TmApp* x = tm_as<TmApp>(t)) return is_spine(x->f);
        if (const TmPiApp* x = tm_as<TmPiApp>(t)) return is_spine(x->f);
        if (const TmFst* x = tm_as<TmFst>(t)) return is_spine(x->t);
        if (const TmSnd* x = tm_as<TmSnd>(t)) return is_spine(x->t);
        return false;
    }

    static bool is_canonical(const TmP& t) {
        switch (t->node.index()) {
            default: return false;
            case tm_index<TmStar>(): case tm_index<TmTopUnit>(): case tm_index<TmTt>():
            case tm_index<TmFf>(): case tm_index<TmTensor>(): case tm_index<TmSigmaPair>():
            case tm_index<TmBang>(): case tm_index<TmLam>(): case tm_index<TmPiLam>():
            case tm_index<TmPair>(): case tm_index<TmInl>(): case tm_index<TmInr>():
            case tm_index<TmRefl>():
                return true;
        }
    }

    static bool is_rigid(const TmP& t) { return is_canonical(t) || is_spine(t); }

    // -- normalization --------------------------------------------------------

    struct BSpec {
        Sort sort;
        std::string hint;
        TyP ty;  // may be null
    };

    // Open a binder body with fresh variables, run f on it, close again.
    TmP under(const std::vector<BSpec>& specs, const TmP& body,
              const std::function<TmP(const TmP&)>& f) {
        std::vector<TmP> vars;
        std::vector<CloseSpec> close;
        for (auto& s : specs) {
            TmP v = fresh_var(s.sort, s.hint, s.ty);
            close.push_back({s.sort, tm_as<TmFVar>(v)->name});
            vars.push_back(v);
        }
        return close_tm(f(open_tm(body, vars, 0)), close, 0);
    }

    TmP norm(const TmP& t) {
        if (!t || !spend()) return t;
        Span sp = t->span;
        auto rec = [&](const TmP& s) { return norm(s); };
        TmP cur = std::visit(overloaded{
            [&](const TmBVar&) -> TmP { return t; },
            [&](const TmFVar&) -> TmP { return t; },
            [&](const TmConst& n) -> TmP {
                std::vector<TmP> as;
                for (auto& a : n.args) as.push_back(rec(a));
                return mk_tm(TmConst{n.name, std::move(as)}, sp);
            },
            [&](const TmStar&) -> TmP { return t; },
            [&](const TmTopUnit&) -> TmP { return t; },
            [&](const TmTt&) -> TmP { return t; },
            [&](const TmFf&) -> TmP { return t; },
            [&](const TmTensor& n) -> TmP { return mk_tm(TmTensor{rec(n.a), rec(n.b)}, sp); },
            [&](const TmSigmaPair& n) -> TmP {
                return mk_tm(TmSigmaPair{rec(n.a), rec(n.b), n.sigma}, sp);
            },
            [&](const TmBang& n) -> TmP { return mk_tm(TmBang{rec(n.a)}, sp); },
            [&](const TmLam& n) -> TmP {
                return mk_tm(TmLam{n.hint, n.dom,
                                   under({{Sort::Lin, n.hint, n.dom}}, n.body, rec)}, sp);
            },
            [&](const TmPiLam& n) -> TmP {
                return mk_tm(TmPiLam{n.hint, n.dom,
                                     under({{Sort::Int, n.hint, n.dom}}, n.body, rec)}, sp);
            },
            [&](const TmApp& n) -> TmP { return mk_tm(TmApp{rec(n.f), rec(n.a)}, sp); },
            [&](const TmPiApp& n) -> TmP { return mk_tm(TmPiApp{rec(n.f), rec(n.a)}, sp); },
            [&](const TmPair& n) -> TmP { return mk_tm(TmPair{rec(n.a), rec(n.b)}, sp); },
            [&](const TmFst& n) -> TmP { return mk_tm(TmFst{rec(n.t)}, sp); },
            [&](const TmSnd& n) -> TmP { return mk_tm(TmSnd{rec(n.t)}, sp); },
            [&](const TmInl& n) -> TmP { return mk_tm(TmInl{n.other, rec(n.t)}, sp); },
            [&](const TmInr& n) -> TmP { return mk_tm(TmInr{n.other, rec(n.t)}, sp); },
            [&](const TmCase& n) -> TmP {
                TmP s = rec(n.scrut);
                TyP sty = spine_type(s);
                const TyPlus* pl = sty ? ty_as<TyPlus>(sty) : nullptr;
                return mk_tm(TmCase{n.motive, s,
                                    n.hx, under({{Sort::Lin, n.hx, pl ? pl->a : nullptr}}, n.left, rec),
                                    n.hy, under({{Sort::Lin, n.hy, pl ? pl->b : nullptr}}, n.right, rec)},
                             sp);
            },
            [&](const TmLetUnit& n) -> TmP {
                return mk_tm(TmLetUnit{n.motive, rec(n.scrut), rec(n.body)}, sp);
            },
            [&](const TmLetTensor& n) -> TmP {
                TmP s = rec(n.scrut);
                TyP sty = spine_type(s);
                const TyTensor* tn = sty ? ty_as<TyTensor>(sty) : nullptr;
                return mk_tm(TmLetTensor{n.motive, s, n.hx, n.hy,
                                         under({{Sort::Lin, n.hx, tn ? tn->a : nullptr},
                                                {Sort::Lin, n.hy, tn ? tn->b : nullptr}},
                                               n.body, rec)},
                             sp);
            },
            [&](const TmLetSigma& n) -> TmP {
                TmP s = rec(n.scrut);
                TyP sty = spine_type(s);
                const TySigma* sg = sty ? ty_as<TySigma>(sty) : nullptr;
                TyP xty = sg ? sg->dom : nullptr;
                TmP xv = fresh_var(Sort::Int, n.hx, xty);
                TyP yty = sg ? open_ty1(sg->body, xv) : nullptr;
                TmP yv = fresh_var(Sort::Lin, n.hy, yty);
                TmP body = open_tm(n.body, {xv, yv}, 0);
                body = close_tm(rec(body),
                                {{Sort::Int, tm_as<TmFVar>(xv)->name},
                                 {Sort::Lin, tm_as<TmFVar>(yv)->name}},
                                0);
                return mk_tm(TmLetSigma{n.motive, s, n.hx, n.hy, body}, sp);
            },
            [&](const TmLetBang& n) -> TmP {
                TmP s = rec(n.scrut);
                TyP sty = spine_type(s);
                const TyBang* bg = sty ? ty_as<TyBang>(sty) : nullptr;
                return mk_tm(TmLetBang{n.motive, s, n.hx,
                                       under({{Sort::Int, n.hx, bg ? bg->a : nullptr}}, n.body, rec)},
                             sp);
            },
            [&](const TmAbort& n) -> TmP { return mk_tm(TmAbort{n.motive, rec(n.scrut)}, sp); },
            [&](const TmRefl& n) -> TmP { return mk_tm(TmRefl{rec(n.a)}, sp); },
            [&](const TmIf& n) -> TmP {
                return mk_tm(TmIf{n.hz, n.motive, rec(n.scrut), rec(n.thn), rec(n.els)}, sp);
            },
            [&](const TmIdElim& n) -> TmP {
                TyP aty = spine_type(n.a);
                return mk_tm(TmIdElim{n.hx, n.hx2, n.motive, n.tele, n.hz,
                                      under({{Sort::Int, n.hz, aty}}, n.branch, rec),
                                      rec(n.a), rec(n.a2), rec(n.p)},
                             sp);
            },
        }, t->node);

        for (;;) {
            if (!spend()) return cur;
            if (TmP r = try_creduce(cur)) { cur = norm(r); continue; }
            if (TmP r = try_float(cur)) { cur = norm(r); continue; }
            if (TmP r = try_swap(cur)) { cur = norm(r); continue; }
            break;
        }
        return cur;
    }

    TmP try_creduce(const TmP& t) {
        Span sp = t->span;
        if (const TmLetUnit* n = tm_as<TmLetUnit>(t)) {
            if (tm_as<TmStar>(n->scrut)) { mark("I-C"); return n->body; }
        }
        if (const TmLetTensor* n = tm_as<TmLetTensor>(t)) {
            if (const TmTensor* s = tm_as<TmTensor>(n->scrut)) {
                mark("(x)-C"); mark("Lin-Tm-Subst");
                return open_tm(n->body, {s->a, s->b}, 0);
            }
        }
        if (const TmLetSigma* n = tm_as<TmLetSigma>(t)) {
            if (const TmSigmaPair* s = tm_as<TmSigmaPair>(n->scrut)) {
                mark("Sg-C"); mark("Int-Tm-Subst"); mark("Lin-Tm-Subst");
                return open_tm(n->body, {s->a, s->b}, 0);
            }
            if (const TmTensor* s = tm_as<TmTensor>(n->scrut)) {
                // unelaborated spelling of the dependent pair
                if (const TmBang* bg = tm_as<TmBang>(s->a)) {
                    mark("Sg-C"); mark("Int-Tm-Subst"); mark("Lin-Tm-Subst");
                    return open_tm(n->body, {bg->a, s->b}, 0);
                }
            }
        }
        if (const TmLetBang* n = tm_as<TmLetBang>(t)) {
            if (const TmBang* s = tm_as<TmBang>(n->scrut)) {
                mark("!-C"); mark("Int-Tm-Subst");
                return open_tm1(n->body, s->a);
            }
        }
        if (const TmApp* n = tm_as<TmApp>(t)) {
            if (const TmLam* f = tm_as<TmLam>(n->f)) {
                mark("-o-C"); mark("Lin-Tm-Subst");
                return open_tm1(f->body, n->a);
            }
            if (const TmPiLam* f = tm_as<TmPiLam>(n->f)) {
                if (const TmBang* bg = tm_as<TmBang>(n->a)) {
                    mark("Pi-C"); mark("Int-Tm-Subst");
                    return open_tm1(f->body, bg->a);
                }
            }
            if (const TmBang* bg = tm_as<TmBang>(n->a)) {
                // canonical spelling of dependent application
                TyP fty = spine_type(n->f);
                if (fty && ty_as<TyPi>(fty))
                    return mk_tm(TmPiApp{n->f, bg->a}, t->span);
            }
        }
        if (const TmPiApp* n = tm_as<TmPiApp>(t)) {
            if (const TmPiLam* f = tm_as<TmPiLam>(n->f)) {
                mark("Pi-C"); mark("Int-Tm-Subst");
                return open_tm1(f->body, n->a);
            }
        }
        if (const TmFst* n = tm_as<TmFst>(t)) {
            if (const TmPair* s = tm_as<TmPair>(n->t)) { mark("&-C1"); return s->a; }
        }
        if (const TmSnd* n = tm_as<TmSnd>(t)) {
            if (const TmPair* s = tm_as<TmPair>(n->t)) { mark("&-C2"); return s->b; }
        }
        if (const TmCase* n = tm_as<TmCase>(t)) {
            if (const TmInl* s = tm_as<TmInl>(n->scrut)) {
                mark("(+)-C1"); mark("Lin-Tm-Subst");
                return open_tm1(n->left, s->t);
            }
            if (const TmInr* s = tm_as<TmInr>(n->scrut)) {
                mark("(+)-C2"); mark("Lin-Tm-Subst");
                return open_tm1(n->right, s->t);
            }
        }
        if (const TmIf* n = tm_as<TmIf>(t)) {
            if (tm_as<TmTt>(n->scrut)) { mark("2-C1"); return n->thn; }
            if (tm_as<TmFf>(n->scrut)) { mark("2-C2"); return n->els; }
        }
        if (const TmIdElim* n = tm_as<TmIdElim>(t)) {
            if (const TmRefl* s = tm_as<TmRefl>(n->p)) {
                mark("Id-C"); mark("Int-Tm-Subst");
                return open_tm1(n->branch, s->a);
            }
        }
        return nullptr;
    }

    // An eliminator that may float out of a linear position.
    bool floatable(const TmP& e) const {
        if (tm_as<TmLetUnit>(e) || tm_as<TmLetTensor>(e) || tm_as<TmLetSigma>(e) ||
            tm_as<TmLetBang>(e) || tm_as<TmCase>(e) || tm_as<TmAbort>(e))
            return true;
        if (const TmIf* n = tm_as<TmIf>(e))
            return !n->motive || !uses_bvar_ty(n->motive, 0, -1);
        return false;
    }

    // Result type of a floated eliminator in its new, outer position: the
    // parent's own result type, when the annotations at hand determine it.
    // hole = which field of parent held the eliminator (meaning varies).
    TyP outer_motive(const TmP& parent, const TyP& elim_motive, int hole) {
        Span sp;
        return std::visit(overloaded{
            [&](const TmApp&) -> TyP {
                if (hole == 0 && elim_motive)
                    if (const TyLolli* l = ty_as<TyLolli>(elim_motive)) return l->b;
                return nullptr;
            },
            [&](const TmPiApp& n) -> TyP {
                if (hole == 0 && elim_motive)
                    if (const TyPi* p = ty_as<TyPi>(elim_motive)) return open_ty1(p->body, n.a);
                return nullptr;
            },
            [&](const TmFst&) -> TyP {
                if (elim_motive)
                    if (const TyWith* w = ty_as<TyWith>(elim_motive)) return w->a;
                return nullptr;
            },
            [&](const TmSnd&) -> TyP {
                if (elim_motive)
                    if (const TyWith* w = ty_as<TyWith>(elim_motive)) return w->b;
                return nullptr;
            },
            [&](const TmTensor&) -> TyP { return nullptr; },
            [&](const TmSigmaPair& n) -> TyP { return n.sigma; },
            [&](const TmInl& n) -> TyP {
                return elim_motive ? mk_ty(TyPlus{elim_motive, n.other}, sp) : nullptr;
            },
            [&](const TmInr& n) -> TyP {
                return elim_motive ? mk_ty(TyPlus{n.other, elim_motive}, sp) : nullptr;
            },
            [&](const TmLetUnit& n) -> TyP { return n.motive; },
            [&](const TmLetTensor& n) -> TyP { return n.motive; },
            [&](const TmLetSigma& n) -> TyP { return n.motive; },
            [&](const TmLetBang& n) -> TyP { return n.motive; },
            [&](const TmCase& n) -> TyP { return n.motive; },
            [&](const TmAbort& n) -> TyP { return n.motive; },
            [&](const TmIdElim& n) -> TyP {
                return n.motive ? open_ty(n.motive, {n.a, n.a2}, 0) : nullptr;
            },
            [&](const auto&) -> TyP { return nullptr; },
        }, parent->node);
    }

    // Rebuild `parent` with the eliminator's hole replaced by `inner`; then
    // wrap in the eliminator.  `rebuild` must produce the parent with the
    // given term in the eliminator's old position.
    TmP wrap_float(const TmP& parent, const TmP& elim, int hole,
                   const std::function<TmP(const TmP&)>& rebuild) {
        Span sp = elim->span;
        TyP momo;
        if (const TmLetUnit* n = tm_as<TmLetUnit>(elim)) {
            mark("Comm-Let");
            momo = outer_motive(parent, n->motive, hole);
            return mk_tm(TmLetUnit{momo, n->scrut, rebuild(n->body)}, sp);
        }
        if (const TmLetTensor* n = tm_as<TmLetTensor>(elim)) {
            mark("Comm-Let");
            momo = outer_motive(parent, n->motive, hole);
            return mk_tm(TmLetTensor{momo, n->scrut, n->hx, n->hy,
                                     under({{Sort::Lin, n->hx, nullptr}, {Sort::Lin, n->hy, nullptr}},
                                           n->body, rebuild)},
                         sp);
        }
        if (const TmLetSigma* n = tm_as<TmLetSigma>(elim)) {
            mark("Comm-Let");
            momo = outer_motive(parent, n->motive, hole);
            return mk_tm(TmLetSigma{momo, n->scrut, n->hx, n->hy,
                                    under({{Sort::Int, n->hx, nullptr}, {Sort::Lin, n->hy, nullptr}},
                                          n->body, rebuild)},
                        sp);
        }
        if (const TmLetBang* n = tm_as<TmLetBang>(elim)) {
            mark("Comm-Let");
            momo = outer_motive(parent, n->motive, hole);
            return mk_tm(TmLetBang{momo, n->scrut, n->hx,
                                   under({{Sort::Int, n->hx, nullptr}}, n->body, rebuild)},
                         sp);
        }
        if (const TmCase* n = tm_as<TmCase>(elim)) {
            mark("Comm-Case");
            momo = outer_motive(parent, n->motive, hole);
            return mk_tm(TmCase{momo, n->scrut,
                                n->hx, under({{Sort::Lin, n->hx, nullptr}}, n->left, rebuild),
                                n->hy, under({{Sort::Lin, n->hy, nullptr}}, n->right, rebuild)},
                         sp);
        }
        if (const TmAbort* n = tm_as<TmAbort>(elim)) {
            mark("Comm-Abort");
            momo = outer_motive(parent, n->motive, hole);
            return mk_tm(TmAbort{momo, n->scrut}, sp);
        }
        if (const TmIf* n = tm_as<TmIf>(elim)) {
            mark("Comm-If");
            TyP inner = n->motive ? open_ty1(n->motive, mk_tm(TmStar{})) : nullptr;
            momo = outer_motive(parent, inner, hole);
            TyP closed = momo ? close_ty(momo, {{Sort::Int, "%none"}}, 0) : nullptr;
            return mk_tm(TmIf{n->hz, closed, n->scrut, rebuild(n->thn), rebuild(n->els)}, sp);
        }
        return nullptr;
    }

    TmP try_float(const TmP& t) {
        Span sp = t->span;
        auto attempt = [&](const TmP& kid, int hole,
                           const std::function<TmP(const TmP&)>& rebuild) -> TmP {
            if (!kid || !floatable(kid)) return nullptr;
            return wrap_float(t, kid, hole, rebuild);
        };
        if (const TmApp* n = tm_as<TmApp>(t)) {
            if (TmP r = attempt(n->f, 0, [&](const TmP& h) { return mk_tm(TmApp{h, n->a}, sp); }))
                return r;
            if (!tm_as<TmBang>(n->a))
                if (TmP r = attempt(n->a, 1, [&](const TmP& h) { return mk_tm(TmApp{n->f, h}, sp); }))
                    return r;
            return nullptr;
        }
        if (const TmPiApp* n = tm_as<TmPiApp>(t)) {
            return attempt(n->f, 0, [&](const TmP& h) { return mk_tm(TmPiApp{h, n->a}, sp); });
        }
        if (const TmFst* n = tm_as<TmFst>(t))
            return attempt(n->t, 0, [&](const TmP& h) { return mk_tm(TmFst{h}, sp); });
        if (const TmSnd* n = tm_as<TmSnd>(t))
            return attempt(n->t, 0, [&](const TmP& h) { return mk_tm(TmSnd{h}, sp); });
        if (const TmTensor* n = tm_as<TmTensor>(t)) {
            if (TmP r = attempt(n->a, 0, [&](const TmP& h) { return mk_tm(TmTensor{h, n->b}, sp); }))
                return r;
            return attempt(n->b, 1, [&](const TmP& h) { return mk_tm(TmTensor{n->a, h}, sp); });
        }
        if (const TmSigmaPair* n = tm_as<TmSigmaPair>(t))
            return attempt(n->b, 1,
                           [&](const TmP& h) { return mk_tm(TmSigmaPair{n->a, h, n->sigma}, sp); });
        if (const TmInl* n = tm_as<TmInl>(t))
            return attempt(n->t, 0, [&](const TmP& h) { return mk_tm(TmInl{n->other, h}, sp); });
        if (const TmInr* n = tm_as<TmInr>(t))
            return attempt(n->t, 0, [&](const TmP& h) { return mk_tm(TmInr{n->other, h}, sp); });
        if (const TmLetUnit* n = tm_as<TmLetUnit>(t))
            return attempt(n->scrut, 0,
                           [&](const TmP& h) { return mk_tm(TmLetUnit{n->motive, h, n->body}, sp); });
        if (const TmLetTensor* n = tm_as<TmLetTensor>(t))
            return attempt(n->scrut, 0, [&](const TmP& h) {
                return mk_tm(TmLetTensor{n->motive, h, n->hx, n->hy, n->body}, sp);
            });
        if (const TmLetSigma* n = tm_as<TmLetSigma>(t))
            return attempt(n->scrut, 0, [&](const TmP& h) {
                return mk_tm(TmLetSigma{n->motive, h, n->hx, n->hy, n->body}, sp);
            });
        if (const TmLetBang* n = tm_as<TmLetBang>(t))
            return attempt(n->scrut, 0, [&](const TmP& h) {
                return mk_tm(TmLetBang{n->motive, h, n->hx, n->body}, sp);
            });
        if (const TmCase* n = tm_as<TmCase>(t))
            return attempt(n->scrut, 0, [&](const TmP& h) {
                return mk_tm(TmCase{n->motive, h, n->hx, n->left, n->hy, n->right}, sp);
            });
        if (const TmAbort* n = tm_as<TmAbort>(t))
            return attempt(n->scrut, 0,
                           [&](const TmP& h) { return mk_tm(TmAbort{n->motive, h}, sp); });
        if (const TmIdElim* n = tm_as<TmIdElim>(t))
            return attempt(n->p, 0, [&](const TmP& h) {
                return mk_tm(TmIdElim{n->hx, n->hx2, n->motive, n->tele, n->hz, n->branch,
                                      n->a, n->a2, h}, sp);
            });
        return nullptr;
    }

    // Alpha-invariant serialization for the let-reordering key.
    void key_of(const TmP& t, std::map<std::string, int>& names, std::string& out) {
        if (!t) { out += "_"; return; }
        out += std::to_string(t->node.index());
        out += "(";
        std::visit(overloaded{
            [&](const TmBVar& v) { out += "b" + std::to_string(v.depth) + "." + std::to_string(v.slot); },
            [&](const TmFVar& v) {
                if (v.name.size() && v.name[0] == '%') {
                    auto it = names.find(v.name);
                    int k = it == names.end() ? (int)names.size() : it->second;
                    if (it == names.end()) names[v.name] = k;
                    out += "#" + std::to_string(k);
                } else {
                    out += (v.sort == Sort::Lin ? "l:" : "i:") + v.name;
                }
            },
            [&](const TmConst& n) {
                out += n.name;
                for (auto& a : n.args) key_of(a, names, out);
            },
            [&](const TmTensor& n) { key_of(n.a, names, out); key_of(n.b, names, out); },
            [&](const TmSigmaPair& n) { key_of(n.a, names, out); key_of(n.b, names, out); },
            [&](const TmBang& n) { key_of(n.a, names, out); },
            [&](const TmLam& n) { key_of(n.body, names, out); },
            [&](const TmPiLam& n) { key_of(n.body, names, out); },
            [&](const TmApp& n) { key_of(n.f, names, out); key_of(n.a, names, out); },
            [&](const TmPiApp& n) { key_of(n.f, names, out); key_of(n.a, names, out); },
            [&](const TmPair& n) { key_of(n.a, names, out); key_of(n.b, names, out); },
            [&](const TmFst& n) { key_of(n.t, names, out); },
            [&](const TmSnd& n) { key_of(n.t, names, out); },
            [&](const TmInl& n) { key_of(n.t, names, out); },
            [&](const TmInr& n) { key_of(n.t, names, out); },
            [&](const TmCase& n) {
                key_of(n.scrut, names, out); key_of(n.left, names, out); key_of(n.right, names, out);
            },
            [&](const TmLetUnit& n) { key_of(n.scrut, names, out); key_of(n.body, names, out); },
            [&](const TmLetTensor& n) { key_of(n.scrut, names, out); key_of(n.body, names, out); },
            [&](const TmLetSigma& n) { key_of(n.scrut, names, out); key_of(n.body, names, out); },
            [&](const TmLetBang& n) { key_of(n.scrut, names, out); key_of(n.body, names, out); },
            [&](const TmAbort& n) { key_of(n.scrut, names, out); },
            [&](const TmRefl& n) { key_of(n.a, names, out); },
            [&](const TmIf& n) {
                key_of(n.scrut, names, out); key_of(n.thn, names, out); key_of(n.els, names, out);
            },
            [&](const TmIdElim& n) {
                key_of(n.a, names, out); key_of(n.a2, names, out); key_of(n.p, names, out);
                key_of(n.branch, names, out);
            },
            [&](const auto&) {},
        }, t->node);
        out += ")";
    }

    std::string key(const TmP& t) {
        std::map<std::string, int> names;
        std::string out;
        key_of(t, names, out);
        return out;
    }

    struct LetParts {
        TyP motive;
        TmP scrut;
        std::vector<BSpec> binders;
        TmP body;
        int kind;  // variant index
    };

    bool let_parts(const TmP& t, LetParts& p) {
        if (const TmLetUnit* n = tm_as<TmLetUnit>(t)) {
            p = {n->motive, n->scrut, {}, n->body, (int)t->node.index()};
            return true;
        }
        if (const TmLetTensor* n = tm_as<TmLetTensor>(t)) {
            p = {n->motive, n->scrut,
                 {{Sort::Lin, n->hx, nullptr}, {Sort::Lin, n->hy, nullptr}}, n->body,
                 (int)t->node.index()};
            return true;
        }
        if (const TmLetSigma* n = tm_as<TmLetSigma>(t)) {
            p = {n->motive, n->scrut,
                 {{Sort::Int, n->hx, nullptr}, {Sort::Lin, n->hy, nullptr}}, n->body,
                 (int)t->node.index()};
            return true;
        }
        if (const TmLetBang* n = tm_as<TmLetBang>(t)) {
            p = {n->motive, n->scrut, {{Sort::Int, n->hx, nullptr}}, n->body,
                 (int)t->node.index()};
            return true;
        }
        return false;
    }

    TmP build_let(const LetParts& p, std::vector<TmP>& vars, const TmP& open_body, Span sp) {
        // close open_body over the fresh vars and rebuild the let node
        std::vector<CloseSpec> cs;
        for (size_t i = 0; i < p.binders.size(); ++i)
            cs.push_back({p.binders[i].sort, tm_as<TmFVar>(vars[i])->name});
        TmP body = close_tm(open_body, cs, 0);
        if (p.kind == (int)tm_index<TmLetUnit>())
            return mk_tm(TmLetUnit{p.motive, p.scrut, body}, sp);
        if (p.kind == (int)tm_index<TmLetTensor>())
            return mk_tm(TmLetTensor{p.motive, p.scrut, p.binders[0].hint, p.binders[1].hint, body}, sp);
        if (p.kind == (int)tm_index<TmLetSigma>())
            return mk_tm(TmLetSigma{p.motive, p.scrut, p.binders[0].hint, p.binders[1].hint, body}, sp);
        return mk_tm(TmLetBang{p.motive, p.scrut, p.binders[0].hint, body}, sp);
    }

    // Reorder adjacent independent lets into a canonical order.
    TmP try_swap(const TmP& t) {
        LetParts outer;
        if (!let_parts(t, outer)) return nullptr;
        // open the outer body to look at the inner let
        std::vector<TmP> xs;
        for (auto& b : outer.binders) xs.push_back(fresh_var(b.sort, b.hint, b.ty));
        TmP body1 = open_tm(outer.body, xs, 0);
        LetParts inner;
        if (!let_parts(body1, inner)) return nullptr;
        for (auto& x : xs)
            if (uses_free(inner.scrut, tm_as<TmFVar>(x)->sort, tm_as<TmFVar>(x)->name))
                return nullptr;  // dependent: no reorder
        if (key(inner.scrut) >= key(outer.scrut)) return nullptr;
        mark("Lin-Exch");
        // swap: inner let moves out
        std::vector<TmP> ys;
        for (auto& b : inner.binders) ys.push_back(fresh_var(b.sort, b.hint, b.ty));
        TmP body2 = open_tm(inner.body, ys, 0);
        TyP best = outer.motive ? outer.motive : inner.motive;
        LetParts new_inner = outer;
        new_inner.motive = best;
        TmP mid = build_let(new_inner, xs, body2, t->span);
        LetParts new_outer = inner;
        new_outer.motive = best;
        return build_let(new_outer, ys, mid, t->span);
    }

    // -- ext-mode U-expansions -------------------------------------------------

    TmP expansion_of(const TmP& n, const TyP& ty) {
        Span sp = n->span;
        if (ty_as<TyUnit>(ty)) {
            mark("I-U");
            return mk_tm(TmLetUnit{ty, n, mk_tm(TmStar{}, sp)}, sp);
        }
        if (ty_as<TyTensor>(ty)) {
            mark("(x)-U");
            return mk_tm(TmLetTensor{ty, n, "u", "v",
                                     mk_tm(TmTensor{bvar(0, 0), bvar(0, 1)}, sp)}, sp);
        }
        if (const TySigma* sg = ty_as<TySigma>(ty)) {
            mark("Sg-U");
            (void)sg;
            return mk_tm(TmLetSigma{ty, n, "u", "v",
                                    mk_tm(TmSigmaPair{bvar(0, 0), bvar(0, 1), ty}, sp)}, sp);
        }
        if (ty_as<TyBang>(ty)) {
            mark("!-U");
            return mk_tm(TmLetBang{ty, n, "u", mk_tm(TmBang{bvar(0, 0)}, sp)}, sp);
        }
        if (const TyPlus* pl = ty_as<TyPlus>(ty)) {
            mark("(+)-U");
            return mk_tm(TmCase{ty, n,
                                "u", mk_tm(TmInl{pl->b, bvar(0, 0)}, sp),
                                "v", mk_tm(TmInr{pl->a, bvar(0, 0)}, sp)}, sp);
        }
        if (ty_as<TyTwo>(ty)) {
            mark("2-U");
            return mk_tm(TmIf{"z", ty, n, mk_tm(TmTt{}, sp), mk_tm(TmFf{}, sp)}, sp);
        }
        if (ty_as<TyZero>(ty)) {
            mark("0-U");
            return mk_tm(TmAbort{nullptr, n}, sp);
        }
        if (const TyLolli* l = ty_as<TyLolli>(ty)) {
            mark("-o-U");
            return mk_tm(TmLam{"z", l->a, mk_tm(TmApp{n, bvar(0, 0)}, sp)}, sp);
        }
        if (const TyPi* p = ty_as<TyPi>(ty)) {
            mark("Pi-U");
            return mk_tm(TmPiLam{"x", p->dom, mk_tm(TmPiApp{n, bvar(0, 0)}, sp)}, sp);
        }
        if (ty_as<TyWith>(ty)) {
            mark("&-U");
            return mk_tm(TmPair{mk_tm(TmFst{n}, sp), mk_tm(TmSnd{n}, sp)}, sp);
        }
        if (ty_as<TyTop>(ty)) {
            mark("Top-U");
            return mk_tm(TmTopUnit{}, sp);
        }
        return nullptr;
    }

    // One simultaneous round of U-expansions at neutral occurrences of
    // positive type.  `block` is the variant index of the type former whose
    // eliminator immediately scrutinizes this position (-1 if none).
    TmP expand(const TmP& t) { return ex(t, -1, false); }

    TmP ex(const TmP& t, int block, bool in_spine) {
        if (!t || !spend()) return t;
        Span sp = t->span;
        auto rec = [&](const TmP& s) { return ex(s, -1, false); };
        if (is_spine(t)) {
            TmP rebuilt = std::visit(overloaded{
                [&](const TmFVar&) -> TmP { return t; },
                [&](const TmConst& n) -> TmP {
                    std::vector<TmP> as;
                    for (auto& a : n.args) as.push_back(rec(a));
                    return mk_tm(TmConst{n.name, std::move(as)}, sp);
                },
                [&](const TmApp& n) -> TmP {
                    return mk_tm(TmApp{ex(n.f, -1, true), rec(n.a)}, sp);
                },
                [&](const TmPiApp& n) -> TmP {
                    return mk_tm(TmPiApp{ex(n.f, -1, true), rec(n.a)}, sp);
                },
                [&](const TmFst& n) -> TmP { return mk_tm(TmFst{ex(n.t, -1, true)}, sp); },
                [&](const TmSnd& n) -> TmP { return mk_tm(TmSnd{ex(n.t, -1, true)}, sp); },
                [&](const auto&) -> TmP { return t; },
            }, t->node);
            if (in_spine) return rebuilt;
            TyP ty = spine_type(rebuilt);
            if (!ty || (int)ty->node.index() == block) return rebuilt;
            if (TmP e = expansion_of(rebuilt, ty)) return e;
            return rebuilt;
        }
        return std::visit(overloaded{
            [&](const TmBVar&) -> TmP { return t; },
            [&](const TmStar&) -> TmP { return t; },
            [&](const TmTopUnit&) -> TmP { return t; },
            [&](const TmTt&) -> TmP { return t; },
            [&](const TmFf&) -> TmP { return t; },
            [&](const TmTensor& n) -> TmP { return mk_tm(TmTensor{rec(n.a), rec(n.b)}, sp); },
            [&](const TmSigmaPair& n) -> TmP {
                return mk_tm(TmSigmaPair{rec(n.a), rec(n.b), n.sigma}, sp);
            },
            [&](const TmBang& n) -> TmP { return mk_tm(TmBang{rec(n.a)}, sp); },
            [&](const TmLam& n) -> TmP {
                return mk_tm(TmLam{n.hint, n.dom, under({{Sort::Lin, n.hint, n.dom}}, n.body, rec)}, sp);
            },
            [&](const TmPiLam& n) -> TmP {
                return mk_tm(TmPiLam{n.hint, n.dom, under({{Sort::Int, n.hint, n.dom}}, n.body, rec)}, sp);
            },
            [&](const TmPair& n) -> TmP { return mk_tm(TmPair{rec(n.a), rec(n.b)}, sp); },
            [&](const TmInl& n) -> TmP { return mk_tm(TmInl{n.other, rec(n.t)}, sp); },
            [&](const TmInr& n) -> TmP { return mk_tm(TmInr{n.other, rec(n.t)}, sp); },
            [&](const TmCase& n) -> TmP {
                TmP s = ex(n.scrut, (int)ty_index<TyPlus>(), false);
                TyP sty = spine_type(n.scrut);
                const TyPlus* pl = sty ? ty_as<TyPlus>(sty) : nullptr;
                return mk_tm(TmCase{n.motive, s,
                                    n.hx, under({{Sort::Lin, n.hx, pl ? pl->a : nullptr}}, n.left, rec),
                                    n.hy, under({{Sort::Lin, n.hy, pl ? pl->b : nullptr}}, n.right, rec)},
                             sp);
            },
            [&](const TmLetUnit& n) -> TmP {
                return mk_tm(TmLetUnit{n.motive, ex(n.scrut, (int)ty_index<TyUnit>(), false),
                                       rec(n.body)}, sp);
            },
            [&](const TmLetTensor& n) -> TmP {
                TmP s = ex(n.scrut, (int)ty_index<TyTensor>(), false);
                TyP sty = spine_type(n.scrut);
                const TyTensor* tn = sty ? ty_as<TyTensor>(sty) : nullptr;
                return mk_tm(TmLetTensor{n.motive, s, n.hx, n.hy,
                                         under({{Sort::Lin, n.hx, tn ? tn->a : nullptr},
                                                {Sort::Lin, n.hy, tn ? tn->b : nullptr}},
                                               n.body, rec)}, sp);
            },
            [&](const TmLetSigma& n) -> TmP {
                TmP s = ex(n.scrut, (int)ty_index<TySigma>(), false);
                TyP sty = spine_type(n.scrut);
                const TySigma* sg = sty ? ty_as<TySigma>(sty) : nullptr;
                TyP xty = sg ? sg->dom : nullptr;
                TmP xv = fresh_var(Sort::Int, n.hx, xty);
                TyP yty = sg ? open_ty1(sg->body, xv) : nullptr;
                TmP yv = fresh_var(Sort::Lin, n.hy, yty);
                TmP body = close_tm(rec(open_tm(n.body, {xv, yv}, 0)),
                                    {{Sort::Int, tm_as<TmFVar>(xv)->name},
                                     {Sort::Lin, tm_as<TmFVar>(yv)->name}}, 0);
                return mk_tm(TmLetSigma{n.motive, s, n.hx, n.hy, body}, sp);
            },
            [&](const TmLetBang& n) -> TmP {
                TmP s = ex(n.scrut, (int)ty_index<TyBang>(), false);
                TyP sty = spine_type(n.scrut);
                const TyBang* bg = sty ? ty_as<TyBang>(sty) : nullptr;
                return mk_tm(TmLetBang{n.motive, s, n.hx,
                                       under({{Sort::Int, n.hx, bg ? bg->a : nullptr}}, n.body, rec)},
                             sp);
            },
            [&](const TmAbort& n) -> TmP {
                return mk_tm(TmAbort{n.motive, ex(n.scrut, (int)ty_index<TyZero>(), false)}, sp);
            },
            [&](const TmRefl& n) -> TmP { return mk_tm(TmRefl{rec(n.a)}, sp); },
            [&](const TmIf& n) -> TmP {
                return mk_tm(TmIf{n.hz, n.motive, ex(n.scrut, (int)ty_index<TyTwo>(), false),
                                  rec(n.thn), rec(n.els)}, sp);
            },
            [&](const TmIdElim& n) -> TmP {
                TyP aty = spine_type(n.a);
                return mk_tm(TmIdElim{n.hx, n.hx2, n.motive, n.tele, n.hz,
                                      under({{Sort::Int, n.hz, aty}}, n.branch, rec),
                                      rec(n.a), rec(n.a2), ex(n.p, (int)ty_index<TyId>(), false)},
                             sp);
            },
            [&](const auto&) -> TmP { return t; },  // spine kinds handled above
        }, t->node);
    }

    // -- comparison ------------------------------------------------------------

    bool cmp_pairwise(const std::vector<TmP>& xs, const std::vector<TmP>& ys,
                      const std::vector<TyP>& tys) {
        if (xs.size() != ys.size()) return false;
        for (size_t i = 0; i < xs.size(); ++i)
            if (!cmp(xs[i], ys[i], i < tys.size() ? tys[i] : nullptr)) return false;
        return true;
    }

    bool cmp(const TmP& a, const TmP& b, const TyP& ty) {
        if (!a || !b) return a == b;
        if (!spend()) return false;
        // Top-U: everything of type Top is equal; <> pins the type.
        if (ty && ty_as<TyTop>(ty)) { mark("Top-U"); return true; }
        if (tm_as<TmTopUnit>(a) || tm_as<TmTopUnit>(b)) {
            mark("Top-U");
            return true;
        }
        if (idu_proof_) {
            // Inside an Id-U probe the first argument comes from the branch
            // instantiated at the left endpoint: refl over that endpoint
            // stands for the neutral proof, and the endpoint itself may stand
            // for the right endpoint.
            if (const TmRefl* r = tm_as<TmRefl>(a))
                if (!tm_as<TmRefl>(b) && cmp_plain(r->a, idu_refl_) &&
                    cmp_plain(b, idu_proof_))
                    return true;
            if (!alpha_eq(idu_refl_, idu_rhs_))
                if (cmp_plain(a, idu_refl_) && cmp_plain(b, idu_rhs_)) return true;
        }
        if (a->node.index() == b->node.index()) {
            if (cmp_same(a, b, ty)) return true;
        }
        // notational bridge between f !a and its elaborated dependent form
        auto bridge = [&](const TmP& x, const TmP& y) -> bool {
            const TmApp* ax = tm_as<TmApp>(x);
            const TmPiApp* py = tm_as<TmPiApp>(y);
            if (!ax || !py) return false;
            const TmBang* bg = tm_as<TmBang>(ax->a);
            if (!bg) return false;
            TyP fty = spine_type(ax->f);
            const TyPi* p = fty ? ty_as<TyPi>(fty) : nullptr;
            return cmp(ax->f, py->f, nullptr) && cmp(bg->a, py->a, p ? p->dom : nullptr);
        };
        if (bridge(a, b) || bridge(b, a)) return true;
        auto sbridge = [&](const TmP& x, const TmP& y) -> bool {
            const TmTensor* tx = tm_as<TmTensor>(x);
            const TmSigmaPair* sy = tm_as<TmSigmaPair>(y);
            if (!tx || !sy) return false;
            const TmBang* bg = tm_as<TmBang>(tx->a);
            if (!bg) return false;
            const TySigma* sg = sy->sigma ? ty_as<TySigma>(sy->sigma)
                                          : (ty ? ty_as<TySigma>(ty) : nullptr);
            return cmp(bg->a, sy->a, sg ? sg->dom : nullptr) &&
                   cmp(tx->b, sy->b, sg ? open_ty1(sg->body, sy->a) : nullptr);
        };
        if (sbridge(a, b) || sbridge(b, a)) return true;
        if (mode_.eta_negative) {
            if (tm_as<TmLam>(a) != nullptr && !tm_as<TmLam>(b)) return eta_lolli(a, b, ty);
            if (tm_as<TmLam>(b) != nullptr && !tm_as<TmLam>(a)) return eta_lolli(b, a, ty);
            if (tm_as<TmPiLam>(a) && !tm_as<TmPiLam>(b)) return eta_pi(a, b, ty);
            if (tm_as<TmPiLam>(b) && !tm_as<TmPiLam>(a)) return eta_pi(b, a, ty);
            if (tm_as<TmPair>(a) && !tm_as<TmPair>(b)) return eta_with(a, b, ty);
            if (tm_as<TmPair>(b) && !tm_as<TmPair>(a)) return eta_with(b, a, ty);
            if (const TmIdElim* e = tm_as<TmIdElim>(a))
                if (id_uniq(*e, b)) return true;
            if (const TmIdElim* e = tm_as<TmIdElim>(b))
                if (id_uniq(*e, a)) return true;
        }
        return false;
    }

    bool eta_lolli(const TmP& lam, const TmP& other, const TyP& ty) {
        mark("-o-U");
        const TmLam* l = tm_as<TmLam>(lam);
        TmP f = fresh_var(Sort::Lin, l->hint, l->dom);
        const TyLolli* lt = ty ? ty_as<TyLolli>(ty) : nullptr;
        TmP rhs = norm(mk_tm(TmApp{other, f}, other->span));
        return cmp(open_tm1(l->body, f), rhs, lt ? lt->b : nullptr);
    }

    bool eta_pi(const TmP& lam, const TmP& other, const TyP& ty) {
        mark("Pi-U");
        const TmPiLam* l = tm_as<TmPiLam>(lam);
        TmP f = fresh_var(Sort::Int, l->hint, l->dom);
        const TyPi* pt = ty ? ty_as<TyPi>(ty) : nullptr;
        TmP rhs = norm(mk_tm(TmPiApp{other, f}, other->span));
        return cmp(open_tm1(l->body, f), rhs, pt ? open_ty1(pt->body, f) : nullptr);
    }

    bool eta_with(const TmP& pair, const TmP& other, const TyP& ty) {
        mark("&-U");
        const TmPair* p = tm_as<TmPair>(pair);
        const TyWith* wt = ty ? ty_as<TyWith>(ty) : nullptr;
        return cmp(p->a, norm(mk_tm(TmFst{other}, other->span)), wt ? wt->a : nullptr) &&
               cmp(p->b, norm(mk_tm(TmSnd{other}, other->span)), wt ? wt->b : nullptr);
    }

    // Id uniqueness: an eliminator of a neutral proof equals u when the branch,
    // instantiated at the left endpoint with `refl` standing for the proof,
    // matches u.
    bool id_uniq(const TmIdElim& e, const TmP& u) {
        if (!is_spine(e.p) || idu_proof_) return false;
        idu_refl_ = e.a;
        idu_rhs_ = e.a2;
        idu_proof_ = e.p;
        bool ok = cmp(open_tm1(e.branch, e.a), u, nullptr);
        idu_refl_ = nullptr;
        idu_rhs_ = nullptr;
        idu_proof_ = nullptr;
        if (ok) mark("Id-U");
        return ok;
    }

    // Arguments by value: callers pass the idu_ members themselves.
    bool cmp_plain(TmP a, TmP b) {
        TmP s1 = idu_refl_, s2 = idu_rhs_, s3 = idu_proof_;
        idu_refl_ = idu_rhs_ = idu_proof_ = nullptr;
        bool r = cmp(a, b, nullptr);
        idu_refl_ = s1;
        idu_rhs_ = s2;
        idu_proof_ = s3;
        return r;
    }

    bool cmp_same(const TmP& a, const TmP& b, const TyP& ty) {
        Span sp;
        return std::visit(overloaded{
            [&](const TmBVar& x) {
                auto& y = std::get<TmBVar>(b->node);
                return x.depth == y.depth && x.slot == y.slot;
            },
            [&](const TmFVar& x) {
                auto& y = std::get<TmFVar>(b->node);
                return x.sort == y.sort && x.name == y.name;
            },
            [&](const TmConst& x) {
                auto& y = std::get<TmConst>(b->node);
                if (x.name != y.name || x.args.size() != y.args.size()) return false;
                std::vector<TyP> tys;
                if (sig_) {
                    if (const ConstDecl* cd = sig_->find_const(x.name)) {
                        for (size_t i = 0; i < x.args.size() && i < cd->tele.size(); ++i) {
                            TyP at = cd->tele[i].ty;
                            for (size_t j = 0; j < i; ++j)
                                at = subst_int_ty(at, cd->tele[j].name, x.args[j]);
                            tys.push_back(at);
                        }
                    }
                }
                return cmp_pairwise(x.args, y.args, tys);
            },
            [&](const TmStar&) { return true; },
            [&](const TmTopUnit&) { return true; },
            [&](const TmTt&) { return true; },
            [&](const TmFf&) { return true; },
            [&](const TmTensor& x) {
                auto& y = std::get<TmTensor>(b->node);
                const TyTensor* tt = ty ? ty_as<TyTensor>(ty) : nullptr;
                return cmp(x.a, y.a, tt ? tt->a : nullptr) && cmp(x.b, y.b, tt ? tt->b : nullptr);
            },
            [&](const TmSigmaPair& x) {
                auto& y = std::get<TmSigmaPair>(b->node);
                TyP sig = x.sigma ? x.sigma : (y.sigma ? y.sigma : ty);
                const TySigma* sg = sig ? ty_as<TySigma>(sig) : nullptr;
                return cmp(x.a, y.a, sg ? sg->dom : nullptr) &&
                       cmp(x.b, y.b, sg ? open_ty1(sg->body, x.a) : nullptr);
            },
            [&](const TmBang& x) {
                const TyBang* bt = ty ? ty_as<TyBang>(ty) : nullptr;
                return cmp(x.a, std::get<TmBang>(b->node).a, bt ? bt->a : nullptr);
            },
            [&](const TmLam& x) {
                auto& y = std::get<TmLam>(b->node);
                TmP f = fresh_var(Sort::Lin, x.hint, x.dom ? x.dom : y.dom);
                const TyLolli* lt = ty ? ty_as<TyLolli>(ty) : nullptr;
                return cmp(open_tm1(x.body, f), open_tm1(y.body, f), lt ? lt->b : nullptr);
            },
            [&](const TmPiLam& x) {
                auto& y = std::get<TmPiLam>(b->node);
                TmP f = fresh_var(Sort::Int, x.hint, x.dom ? x.dom : y.dom);
                const TyPi* pt = ty ? ty_as<TyPi>(ty) : nullptr;
                return cmp(open_tm1(x.body, f), open_tm1(y.body, f),
                           pt ? open_ty1(pt->body, f) : nullptr);
            },
            [&](const TmApp& x) {
                auto& y = std::get<TmApp>(b->node);
                if (!cmp(x.f, y.f, nullptr)) return false;
                TyP fty = spine_type(x.f);
                TyP argty = nullptr;
                if (fty) {
                    if (const TyLolli* l = ty_as<TyLolli>(fty)) argty = l->a;
                    else if (const TyPi* p = ty_as<TyPi>(fty))
                        argty = mk_ty(TyBang{p->dom}, sp);
                }
                return cmp(x.a, y.a, argty);
            },
            [&](const TmPiApp& x) {
                auto& y = std::get<TmPiApp>(b->node);
                if (!cmp(x.f, y.f, nullptr)) return false;
                TyP fty = spine_type(x.f);
                const TyPi* p = fty ? ty_as<TyPi>(fty) : nullptr;
                return cmp(x.a, y.a, p ? p->dom : nullptr);
            },
            [&](const TmPair& x) {
                auto& y = std::get<TmPair>(b->node);
                const TyWith* wt = ty ? ty_as<TyWith>(ty) : nullptr;
                return cmp(x.a, y.a, wt ? wt->a : nullptr) && cmp(x.b, y.b, wt ? wt->b : nullptr);
            },
            [&](const TmFst& x) { return cmp(x.t, std::get<TmFst>(b->node).t, nullptr); },
            [&](const TmSnd& x) { return cmp(x.t, std::get<TmSnd>(b->node).t, nullptr); },
            [&](const TmInl& x) {
                const TyPlus* pt = ty ? ty_as<TyPlus>(ty) : nullptr;
                return cmp(x.t, std::get<TmInl>(b->node).t, pt ? pt->a : nullptr);
            },
            [&](const TmInr& x) {
                const TyPlus* pt = ty ? ty_as<TyPlus>(ty) : nullptr;
                return cmp(x.t, std::get<TmInr>(b->node).t, pt ? pt->b : nullptr);
            },
            [&](const TmCase& x) {
                auto& y = std::get<TmCase>(b->node);
                if (!cmp(x.scrut, y.scrut, nullptr)) return false;
                TyP sty = spine_type(x.scrut);
                const TyPlus* pl = sty ? ty_as<TyPlus>(sty) : nullptr;
                TmP fx = fresh_var(Sort::Lin, x.hx, pl ? pl->a : nullptr);
                if (!cmp(open_tm1(x.left, fx), open_tm1(y.left, fx), ty)) return false;
                TmP fy = fresh_var(Sort::Lin, x.hy, pl ? pl->b : nullptr);
                return cmp(open_tm1(x.right, fy), open_tm1(y.right, fy), ty);
            },
            [&](const TmLetUnit& x) {
                auto& y = std::get<TmLetUnit>(b->node);
                return cmp(x.scrut, y.scrut, nullptr) && cmp(x.body, y.body, ty);
            },
            [&](const TmLetTensor& x) {
                auto& y = std::get<TmLetTensor>(b->node);
                if (!cmp(x.scrut, y.scrut, nullptr)) return false;
                TyP sty = spine_type(x.scrut);
                const TyTensor* tn = sty ? ty_as<TyTensor>(sty) : nullptr;
                TmP fx = fresh_var(Sort::Lin, x.hx, tn ? tn->a : nullptr);
                TmP fy = fresh_var(Sort::Lin, x.hy, tn ? tn->b : nullptr);
                return cmp(open_tm(x.body, {fx, fy}, 0), open_tm(y.body, {fx, fy}, 0), ty);
            },
            [&](const TmLetSigma& x) {
                auto& y = std::get<TmLetSigma>(b->node);
                if (!cmp(x.scrut, y.scrut, nullptr)) return false;
                TyP sty = spine_type(x.scrut);
                const TySigma* sg = sty ? ty_as<TySigma>(sty) : nullptr;
                TmP fx = fresh_var(Sort::Int, x.hx, sg ? sg->dom : nullptr);
                TmP fy = fresh_var(Sort::Lin, x.hy, sg ? open_ty1(sg->body, fx) : nullptr);
                return cmp(open_tm(x.body, {fx, fy}, 0), open_tm(y.body, {fx, fy}, 0), ty);
            },
            [&](const TmLetBang& x) {
                auto& y = std::get<TmLetBang>(b->node);
                if (!cmp(x.scrut, y.scrut, nullptr)) return false;
                TyP sty = spine_type(x.scrut);
                const TyBang* bg = sty ? ty_as<TyBang>(sty) : nullptr;
                TmP fx = fresh_var(Sort::Int, x.hx, bg ? bg->a : nullptr);
                return cmp(open_tm1(x.body, fx), open_tm1(y.body, fx), ty);
            },
            [&](const TmAbort& x) {
                return cmp(x.scrut, std::get<TmAbort>(b->node).scrut, mk_ty(TyZero{}, sp));
            },
            [&](const TmRefl& x) {
                // Id-U matching: refl !r stands for the active neutral proof.
                const TyId* it = ty ? ty_as<TyId>(ty) : nullptr;
                return cmp(x.a, std::get<TmRefl>(b->node).a, it ? it->a : nullptr);
            },
            [&](const TmIf& x) {
                auto& y = std::get<TmIf>(b->node);
                if (!cmp(x.scrut, y.scrut, mk_ty(TyTwo{}, sp))) return false;
                return cmp(x.thn, y.thn, nullptr) && cmp(x.els, y.els, nullptr);
            },
            [&](const TmIdElim& x) {
                auto& y = std::get<TmIdElim>(b->node);
                if (x.tele.size() != y.tele.size()) return false;
                for (size_t i = 0; i < x.tele.size(); ++i)
                    if (x.tele[i].var != y.tele[i].var) return false;
                if (!cmp(x.a, y.a, nullptr) || !cmp(x.a2, y.a2, nullptr) ||
                    !cmp(x.p, y.p, nullptr))
                    return false;
                TmP fz = fresh_var(Sort::Int, x.hz, spine_type(x.a));
                return cmp(open_tm1(x.branch, fz), open_tm1(y.branch, fz), nullptr);
            },
        }, a->node);
    }

    // Definite distinctness of two rigid normal forms at (optional) type ty.
    bool distinct(const TmP& a, const TmP& b, const TyP& ty) {
        if (!spend()) return false;
        if (ty && ty_as<TyTop>(ty)) return false;
        if (tm_as<TmTopUnit>(a) || tm_as<TmTopUnit>(b)) return false;
        if (!is_rigid(a) || !is_rigid(b)) return false;
        bool ca = is_canonical(a), cb = is_canonical(b);
        if (ca && cb) {
            if (a->node.index() != b->node.index()) {
                // only same-type constructor clashes are meaningful
                bool two = (tm_as<TmTt>(a) || tm_as<TmFf>(a)) && (tm_as<TmTt>(b) || tm_as<TmFf>(b));
                bool plus = (tm_as<TmInl>(a) || tm_as<TmInr>(a)) &&
                            (tm_as<TmInl>(b) || tm_as<TmInr>(b));
                return two || plus;
            }
            return distinct_same(a, b, ty);
        }
        if (ca != cb) {
            // canonical vs neutral spine: conclusive at positive type (no rule
            // equates a neutral with a constructor there), but eta can relate
            // them at the negative formers, and Top swallows everything.
            const TmP& can = ca ? a : b;
            if (tm_as<TmLam>(can) || tm_as<TmPiLam>(can) || tm_as<TmPair>(can)) return false;
            TyP sty = spine_type(ca ? b : a);
            if (sty && ty_as<TyTop>(sty)) return false;
            return true;
        }
        // both spines
        if (const TmFVar* x = tm_as<TmFVar>(a)) {
            const TmFVar* y = tm_as<TmFVar>(b);
            if (!y) return head_mismatch(a, b);
            TyP sty = local_type(x->name, x->sort);
            if (sty && ty_as<TyTop>(sty)) return false;
            return x->name != y->name || x->sort != y->sort;
        }
        auto bridged = [&](const TmP& x, const TmP& y) -> int {
            const TmApp* ax = tm_as<TmApp>(x);
            const TmPiApp* py = tm_as<TmPiApp>(y);
            if (!ax || !py) return -1;
            const TmBang* bg = tm_as<TmBang>(ax->a);
            if (!bg) return -1;
            return (distinct(ax->f, py->f, nullptr) || distinct(bg->a, py->a, nullptr)) ? 1 : 0;
        };
        if (a->node.index() != b->node.index()) {
            int r = bridged(a, b);
            if (r < 0) r = bridged(b, a);
            if (r >= 0) return r != 0;
            return head_mismatch(a, b);
        }
        if (const TmConst* x = tm_as<TmConst>(a)) {
            const TmConst* y = tm_as<TmConst>(b);
            if (x->name != y->name) return true;
            for (size_t i = 0; i < x->args.size() && i < y->args.size(); ++i)
                if (distinct(x->args[i], y->args[i], nullptr)) return true;
            return false;
        }
        if (const TmApp* x = tm_as<TmApp>(a)) {
            const TmApp* y = tm_as<TmApp>(b);
            TyP fty = spine_type(x->f);
            TyP argty = nullptr;
            if (fty) {
                if (const TyLolli* l = ty_as<TyLolli>(fty)) argty = l->a;
            }
            return distinct(x->f, y->f, nullptr) || distinct(x->a, y->a, argty);
        }
        if (const TmPiApp* x = tm_as<TmPiApp>(a)) {
            const TmPiApp* y = tm_as<TmPiApp>(b);
            return distinct(x->f, y->f, nullptr) || distinct(x->a, y->a, nullptr);
        }
        if (const TmFst* x = tm_as<TmFst>(a)) return distinct(x->t, tm_as<TmFst>(b)->t, nullptr);
        if (const TmSnd* x = tm_as<TmSnd>(a)) return distinct(x->t, tm_as<TmSnd>(b)->t, nullptr);
        return false;
    }

    bool head_mismatch(const TmP& a, const TmP& b) {
        // different spine shapes: distinct only when the heads themselves
        // differ (shape alone is not conclusive across notations)
        TmP ha = spine_head(a), hb = spine_head(b);
        const TmFVar* x = tm_as<TmFVar>(ha);
        const TmFVar* y = tm_as<TmFVar>(hb);
        if (x && y) return x->name != y->name || x->sort != y->sort;
        const TmConst* cx = tm_as<TmConst>(ha);
        const TmConst* cy = tm_as<TmConst>(hb);
        if (x && cy) return true;
        if (cx && y) return true;
        if (cx && cy && cx->name != cy->name) return true;
        return false;
    }

    static TmP spine_head(const TmP& t) {
        if (const TmApp* x = tm_as<TmApp>(t)) return spine_head(x->f);
        if (const TmPiApp* x = tm_as<TmPiApp>(t)) return spine_head(x->f);
        if (const TmFst* x = tm_as<TmFst>(t)) return spine_head(x->t);
        if (const TmSnd* x = tm_as<TmSnd>(t)) return spine_head(x->t);
        return t;
    }

    bool distinct_same(const TmP& a, const TmP& b, const TyP& ty) {
        Span sp;
        return std::visit(overloaded{
            [&](const TmTensor& x) {
                auto& y = std::get<TmTensor>(b->node);
                const TyTensor* tt = ty ? ty_as<TyTensor>(ty) : nullptr;
                return distinct(x.a, y.a, tt ? tt->a : nullptr) ||
                       distinct(x.b, y.b, tt ? tt->b : nullptr);
            },
            [&](const TmSigmaPair& x) {
                auto& y = std::get<TmSigmaPair>(b->node);
                TyP sig = x.sigma ? x.sigma : y.sigma;
                const TySigma* sg = sig ? ty_as<TySigma>(sig) : nullptr;
                return distinct(x.a, y.a, sg ? sg->dom : nullptr) ||
                       distinct(x.b, y.b, sg ? open_ty1(sg->body, x.a) : nullptr);
            },
            [&](const TmBang& x) {
                const TyBang* bt = ty ? ty_as<TyBang>(ty) : nullptr;
                return distinct(x.a, std::get<TmBang>(b->node).a, bt ? bt->a : nullptr);
            },
            [&](const TmLam& x) {
                auto& y = std::get<TmLam>(b->node);
                TmP f = fresh_var(Sort::Lin, x.hint, x.dom ? x.dom : y.dom);
                const TyLolli* lt = ty ? ty_as<TyLolli>(ty) : nullptr;
                return distinct(open_tm1(x.body, f), open_tm1(y.body, f), lt ? lt->b : nullptr);
            },
            [&](const TmPiLam& x) {
                auto& y = std::get<TmPiLam>(b->node);
                TmP f = fresh_var(Sort::Int, x.hint, x.dom ? x.dom : y.dom);
                const TyPi* pt = ty ? ty_as<TyPi>(ty) : nullptr;
                return distinct(open_tm1(x.body, f), open_tm1(y.body, f),
                                pt ? open_ty1(pt->body, f) : nullptr);
            },
            [&](const TmPair& x) {
                auto& y = std::get<TmPair>(b->node);
                const TyWith* wt = ty ? ty_as<TyWith>(ty) : nullptr;
                return distinct(x.a, y.a, wt ? wt->a : nullptr) ||
                       distinct(x.b, y.b, wt ? wt->b : nullptr);
            },
            [&](const TmInl& x) {
                const TyPlus* pt = ty ? ty_as<TyPlus>(ty) : nullptr;
                return distinct(x.t, std::get<TmInl>(b->node).t, pt ? pt->a : nullptr);
            },
            [&](const TmInr& x) {
                const TyPlus* pt = ty ? ty_as<TyPlus>(ty) : nullptr;
                return distinct(x.t, std::get<TmInr>(b->node).t, pt ? pt->b : nullptr);
            },
            [&](const TmRefl& x) {
                const TyId* it = ty ? ty_as<TyId>(ty) : nullptr;
                return distinct(x.a, std::get<TmRefl>(b->node).a, it ? it->a : nullptr);
            },
            [&](const auto&) { return false; },
        }, a->node);
    }
};

// Convenience entry points -----------------------------------------------------

inline Verdict equal_terms(const Signature& sig, const DualContext& ctx, const TmP& a,
                           const TmP& b, const TyP& ty, EqualityMode mode,
                           Coverage* cov = nullptr) {
    EqEngine e(&sig, ctx, mode, cov);
    return e.term_eq(a, b, ty);
}

inline Verdict equal_types(const Signature& sig, const DualContext& ctx, const TyP& a,
                           const TyP& b, EqualityMode mode, Coverage* cov = nullptr) {
    EqEngine e(&sig, ctx, mode, cov);
    return e.type_eq(a, b);
}

inline TmP normalize(const Signature& sig, const DualContext& ctx, const TmP& t,
                     EqualityMode mode = EqualityMode::defaults(), Coverage* cov = nullptr) {
    EqEngine e(&sig, ctx, mode, cov);
    return e.normal_form(t);
}

// Eta-contraction display pass.  normal_form leaves uniqueness rules alone (the
// comparison handles them by expansion); for printing, fold the obvious
// rebuild-what-you-took-apart patterns back down.  Purely cosmetic: the result
// is definitionally equal to the input.
namespace detail {

inline TmP eta_pass(const TmP& t, long& fresh) {
    if (!t) return t;
    Span sp = t->span;
    auto rec = [&](const TmP& s) { return eta_pass(s, fresh); };
    auto is_var = [](const TmP& s, const std::string& n) {
        auto* v = tm_as<TmFVar>(s);
        return v && v->name == n;
    };
    // open one binder slot with a fresh name, contract the body, and either
    // drop the binder (when `probe` spots the eta pattern) or close it back up
    auto open1 = [&](Sort sort, const std::string& hint, const TmP& body, std::string& name) {
        name = "%" + (hint.empty() ? std::string("v") : hint) + "~" + std::to_string(++fresh);
        return eta_pass(open_tm(body, {fvar(sort, name)}, 0), fresh);
    };
    return std::visit(overloaded{
        [&](const TmLam& n) -> TmP {
            std::string x;
            TmP b = open1(Sort::Lin, n.hint, n.body, x);
            if (auto* ap = tm_as<TmApp>(b))
                if (is_var(ap->a, x) && !uses_free(ap->f, Sort::Lin, x)) return ap->f;
            return mk_tm(TmLam{n.hint, n.dom, close_tm(b, {{Sort::Lin, x}}, 0)}, sp);
        },
        [&](const TmPiLam& n) -> TmP {
            std::string x;
            TmP b = open1(Sort::Int, n.hint, n.body, x);
            if (auto* ap = tm_as<TmPiApp>(b))
                if (is_var(ap->a, x) && !uses_free(ap->f, Sort::Int, x)) return ap->f;
            return mk_tm(TmPiLam{n.hint, n.dom, close_tm(b, {{Sort::Int, x}}, 0)}, sp);
        },
        [&](const TmPair& n) -> TmP {
            TmP a = rec(n.a), b = rec(n.b);
            auto* f = tm_as<TmFst>(a);
            auto* s = tm_as<TmSnd>(b);
            if (f && s && alpha_eq(f->t, s->t)) return f->t;
            return mk_tm(TmPair{a, b}, sp);
        },
        [&](const TmLetUnit& n) -> TmP {
            TmP s = rec(n.scrut), b = rec(n.body);
            if (tm_as<TmStar>(b)) return s;
            return mk_tm(TmLetUnit{n.motive, s, b}, sp);
        },
        [&](const TmLetTensor& n) -> TmP {
            TmP s = rec(n.scrut);
            std::string x = "%u~" + std::to_string(++fresh);
            std::string y = "%v~" + std::to_string(++fresh);
            TmP b = eta_pass(open_tm(n.body, {fvar(Sort::Lin, x), fvar(Sort::Lin, y)}, 0), fresh);
            if (auto* p = tm_as<TmTensor>(b))
                if (is_var(p->a, x) && is_var(p->b, y)) return s;
            return mk_tm(TmLetTensor{n.motive, s, n.hx, n.hy,
                                     close_tm(b, {{Sort::Lin, x}, {Sort::Lin, y}}, 0)}, sp);
        },
        [&](const TmLetSigma& n) -> TmP {
            TmP s = rec(n.scrut);
            std::string x = "%x~" + std::to_string(++fresh);
            std::string y = "%y~" + std::to_string(++fresh);
            TmP b = eta_pass(open_tm(n.body, {fvar(Sort::Int, x), fvar(Sort::Lin, y)}, 0), fresh);
            if (auto* p = tm_as<TmSigmaPair>(b))
                if (is_var(p->a, x) && is_var(p->b, y)) return s;
            return mk_tm(TmLetSigma{n.motive, s, n.hx, n.hy,
                                    close_tm(b, {{Sort::Int, x}, {Sort::Lin, y}}, 0)}, sp);
        },
        [&](const TmLetBang& n) -> TmP {
            TmP s = rec(n.scrut);
            std::string x = "%x~" + std::to_string(++fresh);
            TmP b = eta_pass(open_tm(n.body, {fvar(Sort::Int, x)}, 0), fresh);
            if (auto* g = tm_as<TmBang>(b))
                if (is_var(g->a, x)) return s;
            return mk_tm(TmLetBang{n.motive, s, n.hx, close_tm(b, {{Sort::Int, x}}, 0)}, sp);
        },
        [&](const TmCase& n) -> TmP {
            TmP s = rec(n.scrut);
            std::string x = "%x~" + std::to_string(++fresh);
            std::string y = "%y~" + std::to_string(++fresh);
            TmP l = eta_pass(open_tm(n.left, {fvar(Sort::Lin, x)}, 0), fresh);
            TmP r = eta_pass(open_tm(n.right, {fvar(Sort::Lin, y)}, 0), fresh);
            auto* il = tm_as<TmInl>(l);
            auto* ir = tm_as<TmInr>(r);
            if (il && ir && is_var(il->t, x) && is_var(ir->t, y)) return s;
            return mk_tm(TmCase{n.motive, s, n.hx, close_tm(l, {{Sort::Lin, x}}, 0),
                                n.hy, close_tm(r, {{Sort::Lin, y}}, 0)}, sp);
        },
        [&](const TmIf& n) -> TmP {
            TmP s = rec(n.scrut), u = rec(n.thn), v = rec(n.els);
            if (tm_as<TmTt>(u) && tm_as<TmFf>(v)) return s;
            return mk_tm(TmIf{n.hz, n.motive, s, u, v}, sp);
        },
        [&](const TmConst& n) -> TmP {
            std::vector<TmP> as;
            as.reserve(n.args.size());
            for (auto& a : n.args) as.push_back(rec(a));
            return mk_tm(TmConst{n.name, std::move(as)}, sp);
        },
        [&](const TmTensor& n) -> TmP { return mk_tm(TmTensor{rec(n.a), rec(n.b)}, sp); },
        [&](const TmSigmaPair& n) -> TmP {
            return mk_tm(TmSigmaPair{rec(n.a), rec(n.b), n.sigma}, sp);
        },
        [&](const TmBang& n) -> TmP { return mk_tm(TmBang{rec(n.a)}, sp); },
        [&](const TmApp& n) -> TmP { return mk_tm(TmApp{rec(n.f), rec(n.a)}, sp); },
        [&](const TmPiApp& n) -> TmP { return mk_tm(TmPiApp{rec(n.f), rec(n.a)}, sp); },
        [&](const TmFst& n) -> TmP { return mk_tm(TmFst{rec(n.t)}, sp); },
        [&](const TmSnd& n) -> TmP { return mk_tm(TmSnd{rec(n.t)}, sp); },
        [&](const TmInl& n) -> TmP { return mk_tm(TmInl{n.other, rec(n.t)}, sp); },
        [&](const TmInr& n) -> TmP { return mk_tm(TmInr{n.other, rec(n.t)}, sp); },
        [&](const TmAbort& n) -> TmP { return mk_tm(TmAbort{n.motive, rec(n.scrut)}, sp); },
        [&](const TmRefl& n) -> TmP { return mk_tm(TmRefl{rec(n.a)}, sp); },
        [&](const TmIdElim& n) -> TmP {
            TmIdElim out = n;
            out.a = rec(n.a);
            out.a2 = rec(n.a2);
            out.p = rec(n.p);
            return mk_tm(std::move(out), sp);
        },
        [&](const auto&) -> TmP { return t; },
    }, t->node);
}

}  // namespace detail

inline TmP eta_contract(const TmP& t) {
    long fresh = 0;
    TmP cur = t;
    for (int i = 0; i < 8; ++i) {
        TmP next = detail::eta_pass(cur, fresh);
        if (alpha_eq(next, cur)) return cur;
        cur = next;
    }
    return cur;
}

}  // namespace ildtt
