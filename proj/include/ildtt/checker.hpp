// Resource-aware bidirectional type checker for the dual-context calculus.
//
// Judgments have the shape  Delta; Xi |- t : A  where Delta is intuitionistic
// and Xi is linear.  The checker threads a single mutable linear environment
// through the traversal instead of splitting contexts up front: every entry
// carries a `used` flag, additive branches snapshot and re-merge the flags,
// and positions that must not touch linear resources (under !, intuitionistic
// arguments, Id endpoints, 2-E scrutinees) push a *severed* frame that hides
// everything outside it.  Leftover variables are either absorbed by a Top-I /
// 0-E somewhere in the relevant subtree or reported against the rule that
// required their consumption.
//
// check/infer return Derivations: elaborated term, type, and the linear
// variables each node consumed (in context order), which is exactly the data
// a semantic interpreter needs to build the monoidal wiring.

#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "equality.hpp"
#include "printer.hpp"
#include "rules.hpp"
#include "surface.hpp"
#include "syntax.hpp"

namespace ildtt {

// ---------------------------------------------------------------------------
// Derivations
// ---------------------------------------------------------------------------

struct LinUse {
    long id = -1;       // global entry id, increasing in context order
    std::string name;
    TyP ty;
};

struct Derivation;
using DerivP = std::shared_ptr<Derivation>;

struct Derivation {
    std::string rule;            // rule that concluded this node
    TmP term;                    // elaborated, locally closed
    TyP ty;
    std::vector<LinUse> uses;    // linear vars consumed here, sorted by id
    std::vector<LinUse> absorbed;          // subset of uses routed to an absorber
    std::vector<std::string> opened;       // fresh names chosen for binder slots
    std::vector<long> bound;               // entry ids of linear binders
    bool has_absorber = false;   // a Top-I or 0-E can swallow extra resources
    std::vector<DerivP> kids;
    std::vector<char> sev;       // kids[i] sits behind a severed boundary
};

inline DerivP mk_deriv(std::string rule, TmP term, TyP ty) {
    auto d = std::make_shared<Derivation>();
    d->rule = std::move(rule);
    d->term = std::move(term);
    d->ty = std::move(ty);
    return d;
}

// ---------------------------------------------------------------------------
// Linear environment
// ---------------------------------------------------------------------------

class LinearEnv {
public:
    struct Entry {
        long id;
        std::string name;
        TyP ty;
        int frame;
        bool used = false;
    };
    struct Frame {
        bool severed;
        std::string reason;  // rule to blame when a hidden variable is touched
    };

    LinearEnv() { frames_.push_back({false, ""}); }

    int depth() const { return (int)frames_.size() - 1; }

    void push_frame(bool severed, std::string reason) {
        frames_.push_back({severed, std::move(reason)});
    }
    void pop_frame() {
        int f = depth();
        while (!entries_.empty() && entries_.back().frame == f) entries_.pop_back();
        frames_.pop_back();
    }

    Entry& push(std::string name, TyP ty) {
        entries_.push_back({next_id_++, std::move(name), std::move(ty), depth(), false});
        return entries_.back();
    }

    // Innermost entry with this name, visible or not; `hidden` reports the
    // severing rule when the entry lies outside the current visibility floor.
    Entry* lookup(const std::string& name, std::string* hidden) {
        int floor = 0;
        std::string why;
        for (int i = (int)frames_.size() - 1; i >= 1; --i)
            if (frames_[i].severed) {
                floor = i;
                why = frames_[i].reason;
                break;
            }
        for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
            if (it->name == name) {
                if (hidden) *hidden = it->frame >= floor ? "" : why;
                return &*it;
            }
        return nullptr;
    }

    Entry* by_id(long id) {
        for (auto& e : entries_)
            if (e.id == id) return &e;
        return nullptr;
    }

    std::set<long> used_ids() const {
        std::set<long> s;
        for (auto& e : entries_)
            if (e.used) s.insert(e.id);
        return s;
    }
    std::vector<LinUse> delta_since(const std::set<long>& before) const {
        std::vector<LinUse> out;
        for (auto& e : entries_)
            if (e.used && !before.count(e.id)) out.push_back({e.id, e.name, e.ty});
        return out;
    }
    void restore(const std::set<long>& snap) {
        for (auto& e : entries_) e.used = snap.count(e.id) != 0;
    }

    const std::vector<Entry>& all() const { return entries_; }

    long max_consumed = -1;  // high-water mark for Lin-Exch detection

private:
    std::vector<Entry> entries_;
    std::vector<Frame> frames_;
    long next_id_ = 0;
};

// ---------------------------------------------------------------------------
// Checker
// ---------------------------------------------------------------------------

class Checker {
public:
    explicit Checker(const Signature& sig, EqualityMode conv = EqualityMode::defaults(),
                     Coverage* cov = nullptr)
        : sig_(sig), conv_(conv), cov_(cov) {}

    // Installs (and elaborates) a dual context; marks the context rules.
    DualContext check_context(const DualContext& ctx) {
        mark("C-Emp");
        DualContext out;
        for (auto& e : ctx.intc) {
            TyP t = check_type(e.ty);
            push_int(e.name, t);
            out.intc.push_back({e.name, t});
            mark("Int-C-Ext");
        }
        for (auto& e : ctx.linc) {
            TyP t = check_type(e.ty);
            LinearEnv::Entry& en = lin_.push(e.name, t);
            ctx_lin_ids_.push_back(en.id);
            reserve(e.name);
            out.linc.push_back({e.name, t});
            mark("Lin-C-Ext");
        }
        return out;
    }

    // Well-formedness; returns the elaborated type.
    TyP check_type(const TyP& t) {
        Span sp = t->span;
        return std::visit(overloaded{
            [&](const TyBase& b) -> TyP {
                const BaseDecl* bd = sig_.find_base(b.name);
                if (!bd) fail("unknown type '" + b.name + "'", sp, "Base-F");
                if (b.args.size() != bd->tele.size())
                    fail("type '" + b.name + "' expects " + std::to_string(bd->tele.size()) +
                             " arguments, got " + std::to_string(b.args.size()),
                         sp, "Base-F");
                std::vector<TmP> eargs;
                lin_.push_frame(true, "Base-F");
                for (size_t i = 0; i < b.args.size(); ++i) {
                    TyP want = instantiate_tele(bd->tele, bd->tele[i].ty, eargs);
                    eargs.push_back(check(b.args[i], want)->term);
                }
                lin_.pop_frame();
                if (!bd->tele.empty()) mark("Int-Ty-Subst");
                mark("Base-F");
                return mk_ty(TyBase{b.name, std::move(eargs)}, sp);
            },
            [&](const TyUnit&) { mark("I-F"); return t; },
            [&](const TyTensor& n) {
                mark("(x)-F");
                return mk_ty(TyTensor{check_type(n.a), check_type(n.b)}, sp);
            },
            [&](const TyLolli& n) {
                mark("-o-F");
                return mk_ty(TyLolli{check_type(n.a), check_type(n.b)}, sp);
            },
            [&](const TyTop&) { mark("Top-F"); return t; },
            [&](const TyWith& n) {
                mark("&-F");
                return mk_ty(TyWith{check_type(n.a), check_type(n.b)}, sp);
            },
            [&](const TyZero&) { mark("0-F"); return t; },
            [&](const TyPlus& n) {
                mark("(+)-F");
                return mk_ty(TyPlus{check_type(n.a), check_type(n.b)}, sp);
            },
            [&](const TyBang& n) { mark("!-F"); return mk_ty(TyBang{check_type(n.a)}, sp); },
            [&](const TySigma& n) {
                TyP dom = check_type(n.dom);
                auto [x, body] = open_under(n.hint, dom, n.body);
                mark("Sg-F");
                return mk_ty(TySigma{n.hint, dom, body}, sp);
            },
            [&](const TyPi& n) {
                TyP dom = check_type(n.dom);
                auto [x, body] = open_under(n.hint, dom, n.body);
                mark("Pi-F");
                return mk_ty(TyPi{n.hint, dom, body}, sp);
            },
            [&](const TyId& n) -> TyP {
                TyP a = check_type(n.a);
                lin_.push_frame(true, "Id-F");
                TmP l = check(n.lhs, a)->term;
                TmP r = check(n.rhs, a)->term;
                lin_.pop_frame();
                mark("Id-F");
                return mk_ty(TyId{a, l, r}, sp);
            },
            [&](const TyTwo&) { mark("2-F"); return t; },
        }, t->node);
    }

    // Root-level check: settles all leftover linear context variables.
    DerivP check_term(const TmP& t, const TyP& want) {
        DerivP d = check(t, want);
        finish_root(d, t->span);
        return d;
    }
    DerivP infer_term(const TmP& t) {
        DerivP d = infer(t);
        finish_root(d, t->span);
        return d;
    }

    Verdict types_equal(const TyP& a, const TyP& b) {
        EqEngine e(&sig_, eqctx(), conv_, cov_);
        return e.type_eq(a, b);
    }
    Verdict terms_equal(const TmP& a, const TmP& b, const TyP& ty, EqualityMode m) {
        EqEngine e(&sig_, eqctx(), m, cov_);
        return e.term_eq(a, b, ty);
    }

    void push_int(const std::string& name, TyP ty) {
        delta_.push_back({name, std::move(ty), false});
        reserve(name);
    }
    void reserve(const std::string& name) { taken_.insert(name); }

    DualContext eqctx() const {
        DualContext c;
        for (auto& e : delta_) c.intc.push_back({e.name, e.ty});
        for (auto& e : lin_.all()) c.linc.push_back({e.name, e.ty});
        return c;
    }

private:
    struct DEntry {
        std::string name;
        TyP ty;
        bool used;
    };

    const Signature& sig_;
    EqualityMode conv_;
    Coverage* cov_;
    std::vector<DEntry> delta_;
    LinearEnv lin_;
    std::vector<long> ctx_lin_ids_;
    std::set<std::string> taken_;

    void mark(const char* r) { if (cov_) cov_->mark(r); }
    void mark(const std::string& r) { if (cov_) cov_->mark(r); }

    std::string fresh(const std::string& hint) {
        std::string n = hint.empty() ? "_x" : hint;
        while (taken_.count(n)) n += "'";
        taken_.insert(n);
        return n;
    }
    static TmP var(Sort s, const std::string& n) { return mk_tm(TmFVar{s, n}); }

    void pop_int(const std::string& name) {
        assert(!delta_.empty() && delta_.back().name == name);
        if (!delta_.back().used) mark("Int-Weak");
        delta_.pop_back();
    }

    // Opens a one-slot type binder under a fresh intuitionistic variable and
    // closes the checked body again.
    std::pair<std::string, TyP> open_under(const std::string& hint, const TyP& dom,
                                           const TyP& body) {
        std::string x = fresh(hint);
        push_int(x, dom);
        mark("Int-C-Ext");
        TyP b = check_type(open_ty1(body, var(Sort::Int, x)));
        pop_int(x);
        return {x, close_ty(b, {{Sort::Int, x}}, 0)};
    }

    // ---- conversion ----

    void need_type(const TyP& got, const TyP& want, const char* rule, Span sp,
                   const std::string& what) {
        if (alpha_eq_ty(got, want)) return;
        Verdict v = types_equal(got, want);
        if (v == Verdict::True) { mark("Ty-Conv"); return; }
        std::string m = std::string(rule) + ": " + what + " has type " + print_ty(got) +
                        ", expected " + print_ty(want);
        if (v == Verdict::Undecided)
            m = std::string(rule) + ": cannot decide whether " + print_ty(got) + " equals " +
                print_ty(want);
        fail(m, sp, v == Verdict::Undecided ? "Ty-Conv" : rule);
    }

    DerivP convert(DerivP d, const TyP& want, Span sp) {
        if (alpha_eq_ty(d->ty, want)) return d;
        Verdict v = types_equal(d->ty, want);
        if (v == Verdict::False)
            fail("term has type " + print_ty(d->ty) + ", expected " + print_ty(want), sp,
                 "Tm-Conv");
        if (v == Verdict::Undecided)
            fail("cannot decide whether " + print_ty(d->ty) + " equals " + print_ty(want), sp,
                 "Tm-Conv");
        mark("Tm-Conv");
        DerivP w = mk_deriv("Tm-Conv", d->term, want);
        w->uses = d->uses;
        w->has_absorber = d->has_absorber;
        w->kids = {d};
        w->sev = {0};
        return w;
    }

    // ---- linear plumbing ----

    LinearEnv::Entry& consume(const std::string& name, Span sp) {
        std::string hidden;
        LinearEnv::Entry* e = lin_.lookup(name, &hidden);
        assert(e);
        if (!hidden.empty())
            fail(hidden + ": linear variable '" + name + "' is not available here", sp, hidden);
        if (e->used)
            fail("Lin-Var: linear variable '" + name + "' is used more than once", sp, "Lin-Var");
        e->used = true;
        if (e->id < lin_.max_consumed) mark("Lin-Exch");
        lin_.max_consumed = std::max(lin_.max_consumed, e->id);
        return *e;
    }

    static void insert_use(std::vector<LinUse>& us, const LinUse& u) {
        for (auto& v : us)
            if (v.id == u.id) return;
        us.push_back(u);
        std::sort(us.begin(), us.end(), [](const LinUse& a, const LinUse& b) { return a.id < b.id; });
    }

    // Routes an unused-but-required variable into an absorber below `d`.
    void absorb_into(const DerivP& d, const LinUse& u) {
        insert_use(d->uses, u);
        if (d->rule == "Top-I" || d->rule == "0-E") {
            insert_use(d->absorbed, u);
            return;
        }
        if (d->rule == "2-E") {  // scrutinee is severed; both branches take it
            absorb_into(d->kids[1], u);
            absorb_into(d->kids[2], u);
            return;
        }
        if (d->rule == "(+)-E") {
            if (d->kids[0]->has_absorber) {
                absorb_into(d->kids[0], u);
                return;
            }
            absorb_into(d->kids[1], u);
            absorb_into(d->kids[2], u);
            return;
        }
        if (d->rule == "&-I") {
            absorb_into(d->kids[0], u);
            absorb_into(d->kids[1], u);
            return;
        }
        for (size_t i = 0; i < d->kids.size(); ++i)
            if (!d->sev[i] && d->kids[i]->has_absorber) {
                absorb_into(d->kids[i], u);
                return;
            }
        assert(false && "absorb_into: no absorber below");
    }

    // A linear binder (or context variable) left unused: absorb or reject.
    void settle(const DerivP& d, LinearEnv::Entry& e, const char* rule, Span sp) {
        if (e.used) return;
        if (d->has_absorber) {
            e.used = true;
            absorb_into(d, {e.id, e.name, e.ty});
            return;
        }
        fail(std::string(rule) + ": linear variable '" + e.name + "' is not used", sp, rule);
    }

    void finish_root(DerivP& d, Span sp) {
        for (long id : ctx_lin_ids_) {
            LinearEnv::Entry* e = lin_.by_id(id);
            if (e && !e->used) settle(d, *e, "Lin-C-Ext", sp);
        }
        for (auto& e : delta_)
            if (!e.used) { mark("Int-Weak"); break; }
    }

    // Runs an additive branch: returns its derivation and consumption delta,
    // then rolls the used-flags back so siblings see the same resources.
    template <class F>
    std::pair<DerivP, std::vector<LinUse>> additive(F f) {
        auto snap = lin_.used_ids();
        DerivP d = f();
        auto delta = lin_.delta_since(snap);
        lin_.restore(snap);
        return {d, delta};
    }

    // Branches of an additive elimination must consume the same resources;
    // mismatches are absorbed when possible, otherwise rejected.
    void equalize(DerivP& da, std::vector<LinUse>& ua, DerivP& db, std::vector<LinUse>& ub,
                  const char* rule, Span sp) {
        auto has = [](const std::vector<LinUse>& us, long id) {
            for (auto& u : us)
                if (u.id == id) return true;
            return false;
        };
        for (auto& u : ua)
            if (!has(ub, u.id)) {
                if (!db->has_absorber)
                    fail(std::string(rule) + ": linear variable '" + u.name +
                             "' is consumed in only one branch",
                         sp, rule);
                absorb_into(db, u);
                insert_use(ub, u);
            }
        for (auto& u : ub)
            if (!has(ua, u.id)) {
                if (!da->has_absorber)
                    fail(std::string(rule) + ": linear variable '" + u.name +
                             "' is consumed in only one branch",
                         sp, rule);
                absorb_into(da, u);
                insert_use(ua, u);
            }
        for (auto& u : ua)
            if (LinearEnv::Entry* e = lin_.by_id(u.id)) e->used = true;
    }

    // ---- wrappers: record per-node consumption ----

    DerivP check(const TmP& t, const TyP& want) {
        auto before = lin_.used_ids();
        DerivP d = check_impl(t, want);
        d->uses = lin_.delta_since(before);
        return d;
    }
    DerivP infer(const TmP& t) {
        auto before = lin_.used_ids();
        DerivP d = infer_impl(t);
        d->uses = lin_.delta_since(before);
        return d;
    }

    [[noreturn]] void mismatch(const char* rule, const TyP& want, Span sp) {
        fail(std::string(rule) + ": introduction does not match expected type " + print_ty(want),
             sp, rule);
    }

    // ---- checking ----

    DerivP check_impl(const TmP& t, const TyP& want) {
        Span sp = t->span;
        if (auto* n = tm_as<TmStar>(t)) {
            (void)n;
            if (!ty_as<TyUnit>(want)) mismatch("I-I", want, sp);
            mark("I-I");
            return mk_deriv("I-I", t, want);
        }
        if (tm_as<TmTopUnit>(t)) {
            if (!ty_as<TyTop>(want)) mismatch("Top-I", want, sp);
            mark("Top-I");
            DerivP d = mk_deriv("Top-I", t, want);
            d->has_absorber = true;
            return d;
        }
        if (tm_as<TmTt>(t)) {
            if (!ty_as<TyTwo>(want)) mismatch("2-I1", want, sp);
            mark("2-I1");
            return mk_deriv("2-I1", t, want);
        }
        if (tm_as<TmFf>(t)) {
            if (!ty_as<TyTwo>(want)) mismatch("2-I2", want, sp);
            mark("2-I2");
            return mk_deriv("2-I2", t, want);
        }
        if (auto* n = tm_as<TmTensor>(t)) {
            if (auto* sg = ty_as<TySigma>(want)) {
                auto* bg = tm_as<TmBang>(n->a);
                if (!bg)
                    fail("Sg-I: first component of a dependent pair must be of the form !a", sp,
                         "Sg-I");
                return sigma_pair(bg->a, n->b, want, *sg, sp);
            }
            if (auto* tn = ty_as<TyTensor>(want)) {
                DerivP da = check(n->a, tn->a);
                DerivP db = check(n->b, tn->b);
                mark("(x)-I");
                DerivP d = mk_deriv("(x)-I", mk_tm(TmTensor{da->term, db->term}, sp), want);
                d->kids = {da, db};
                d->sev = {0, 0};
                d->has_absorber = da->has_absorber || db->has_absorber;
                return d;
            }
            mismatch("(x)-I", want, sp);
        }
        if (auto* n = tm_as<TmSigmaPair>(t)) {
            auto* sg = ty_as<TySigma>(want);
            if (!sg) mismatch("Sg-I", want, sp);
            return sigma_pair(n->a, n->b, want, *sg, sp);
        }
        if (auto* n = tm_as<TmBang>(t)) {
            auto* bg = ty_as<TyBang>(want);
            if (!bg) mismatch("!-I", want, sp);
            lin_.push_frame(true, "!-I");
            DerivP da = check(n->a, bg->a);
            lin_.pop_frame();
            mark("!-I");
            DerivP d = mk_deriv("!-I", mk_tm(TmBang{da->term}, sp), want);
            d->kids = {da};
            d->sev = {1};
            return d;
        }
        if (auto* n = tm_as<TmLam>(t)) {
            auto* lo = ty_as<TyLolli>(want);
            if (!lo) mismatch("-o-I", want, sp);
            if (n->dom) {
                TyP dome = check_type(n->dom);
                need_type(dome, lo->a, "-o-I", sp, "the bound variable");
            }
            std::string x = fresh(n->hint);
            lin_.push_frame(false, "");
            long id = lin_.push(x, lo->a).id;
            mark("Lin-C-Ext");
            DerivP db = check(open_tm1(n->body, var(Sort::Lin, x)), lo->b);
            settle(db, *lin_.by_id(id), "-o-I", sp);
            lin_.pop_frame();
            mark("-o-I");
            DerivP d = mk_deriv("-o-I",
                                mk_tm(TmLam{n->hint, lo->a, close_tm(db->term, {{Sort::Lin, x}}, 0)}, sp),
                                want);
            d->kids = {db};
            d->sev = {0};
            d->opened = {x};
            d->bound = {id};
            d->has_absorber = db->has_absorber;
            return d;
        }
        if (auto* n = tm_as<TmPiLam>(t)) {
            auto* pi = ty_as<TyPi>(want);
            if (!pi) mismatch("Pi-I", want, sp);
            if (n->dom) {
                TyP dome = check_type(n->dom);
                need_type(dome, pi->dom, "Pi-I", sp, "the bound variable");
            }
            std::string x = fresh(n->hint);
            push_int(x, pi->dom);
            mark("Int-C-Ext");
            DerivP db = check(open_tm1(n->body, var(Sort::Int, x)), open_ty1(pi->body, var(Sort::Int, x)));
            pop_int(x);
            mark("Pi-I");
            DerivP d = mk_deriv("Pi-I",
                                mk_tm(TmPiLam{n->hint, pi->dom, close_tm(db->term, {{Sort::Int, x}}, 0)}, sp),
                                want);
            d->kids = {db};
            d->sev = {0};
            d->opened = {x};
            d->has_absorber = db->has_absorber;
            return d;
        }
        if (auto* n = tm_as<TmPair>(t)) {
            auto* w = ty_as<TyWith>(want);
            if (!w) mismatch("&-I", want, sp);
            auto [da, ua] = additive([&] { return check(n->a, w->a); });
            auto [db, ub] = additive([&] { return check(n->b, w->b); });
            equalize(da, ua, db, ub, "&-I", sp);
            mark("&-I");
            DerivP d = mk_deriv("&-I", mk_tm(TmPair{da->term, db->term}, sp), want);
            d->kids = {da, db};
            d->sev = {0, 0};
            d->has_absorber = da->has_absorber && db->has_absorber;
            return d;
        }
        if (auto* n = tm_as<TmInl>(t)) {
            auto* pl = ty_as<TyPlus>(want);
            if (!pl) mismatch("(+)-I1", want, sp);
            if (n->other) {
                TyP o = check_type(n->other);
                need_type(o, pl->b, "(+)-I1", sp, "the annotation");
            }
            DerivP da = check(n->t, pl->a);
            mark("(+)-I1");
            DerivP d = mk_deriv("(+)-I1", mk_tm(TmInl{pl->b, da->term}, sp), want);
            d->kids = {da};
            d->sev = {0};
            d->has_absorber = da->has_absorber;
            return d;
        }
        if (auto* n = tm_as<TmInr>(t)) {
            auto* pl = ty_as<TyPlus>(want);
            if (!pl) mismatch("(+)-I2", want, sp);
            if (n->other) {
                TyP o = check_type(n->other);
                need_type(o, pl->a, "(+)-I2", sp, "the annotation");
            }
            DerivP da = check(n->t, pl->b);
            mark("(+)-I2");
            DerivP d = mk_deriv("(+)-I2", mk_tm(TmInr{pl->a, da->term}, sp), want);
            d->kids = {da};
            d->sev = {0};
            d->has_absorber = da->has_absorber;
            return d;
        }
        if (auto* n = tm_as<TmRefl>(t)) {
            auto* idt = ty_as<TyId>(want);
            if (!idt) mismatch("Id-I", want, sp);
            lin_.push_frame(true, "Id-I");
            DerivP da = check(n->a, idt->a);
            lin_.pop_frame();
            for (const TmP& end : {idt->lhs, idt->rhs}) {
                if (alpha_eq(end, da->term)) continue;
                Verdict v = terms_equal(end, da->term, idt->a, conv_);
                if (v == Verdict::True) continue;
                fail(v == Verdict::False
                         ? "Id-I: refl argument does not match the endpoints of " + print_ty(want)
                         : "Id-I: cannot decide whether the refl argument matches " + print_ty(want),
                     sp, "Id-I");
            }
            mark("Id-I");
            DerivP d = mk_deriv("Id-I", mk_tm(TmRefl{da->term}, sp), want);
            d->kids = {da};
            d->sev = {1};
            return d;
        }
        // Eliminators take `want` so branch types propagate.
        switch (t->node.index()) {
            case tm_index<TmLetUnit>():
            case tm_index<TmLetTensor>():
            case tm_index<TmLetSigma>():
            case tm_index<TmLetBang>():
            case tm_index<TmCase>():
            case tm_index<TmIf>():
            case tm_index<TmAbort>():
                return elim(t, want);
            default: break;
        }
        return convert(infer(t), want, sp);
    }

    DerivP sigma_pair(const TmP& a, const TmP& b, const TyP& want, const TySigma& sg, Span sp) {
        Span s = a->span;
        lin_.push_frame(true, "Sg-I");
        DerivP da = check(a, sg.dom);
        lin_.pop_frame();
        DerivP db = check(b, open_ty1(sg.body, da->term));
        mark("Sg-I");
        mark("Int-Ty-Subst");
        DerivP d = mk_deriv("Sg-I", mk_tm(TmSigmaPair{da->term, db->term, want}, s), want);
        d->kids = {da, db};
        d->sev = {1, 0};
        d->has_absorber = db->has_absorber;
        return d;
    }

    // ---- inference ----

    DerivP infer_impl(const TmP& t) {
        Span sp = t->span;
        if (auto* v = tm_as<TmFVar>(t)) {
            if (v->sort == Sort::Lin) {
                LinearEnv::Entry& e = consume(v->name, sp);
                mark("Lin-Var");
                return mk_deriv("Lin-Var", t, e.ty);
            }
            for (size_t i = delta_.size(); i-- > 0;)
                if (delta_[i].name == v->name) {
                    delta_[i].used = true;
                    if (i + 1 != delta_.size()) mark("Int-Exch");
                    mark("Int-Var");
                    return mk_deriv("Int-Var", t, delta_[i].ty);
                }
            fail("unbound variable '" + v->name + "'", sp, "Int-Var");
        }
        if (auto* c = tm_as<TmConst>(t)) {
            const ConstDecl* cd = sig_.find_const(c->name);
            if (!cd) fail("unknown constant '" + c->name + "'", sp, "Const");
            if (c->args.size() != cd->tele.size())
                fail("constant '" + c->name + "' expects " + std::to_string(cd->tele.size()) +
                         " arguments, got " + std::to_string(c->args.size()),
                     sp, "Const");
            std::vector<TmP> eargs;
            std::vector<DerivP> kids;
            lin_.push_frame(true, "Const");
            for (size_t i = 0; i < c->args.size(); ++i) {
                TyP want = instantiate_tele(cd->tele, cd->tele[i].ty, eargs);
                DerivP di = check(c->args[i], want);
                eargs.push_back(di->term);
                kids.push_back(di);
            }
            lin_.pop_frame();
            if (!cd->tele.empty()) mark("Int-Ty-Subst");
            mark("Const");
            DerivP d = mk_deriv("Const", mk_tm(TmConst{c->name, eargs}, sp),
                                instantiate_tele(cd->tele, cd->ty, eargs));
            d->kids = kids;
            d->sev.assign(kids.size(), 1);
            return d;
        }
        if (tm_as<TmStar>(t)) { mark("I-I"); return mk_deriv("I-I", t, mk_ty(TyUnit{})); }
        if (tm_as<TmTopUnit>(t)) {
            mark("Top-I");
            DerivP d = mk_deriv("Top-I", t, mk_ty(TyTop{}));
            d->has_absorber = true;
            return d;
        }
        if (tm_as<TmTt>(t)) { mark("2-I1"); return mk_deriv("2-I1", t, mk_ty(TyTwo{})); }
        if (tm_as<TmFf>(t)) { mark("2-I2"); return mk_deriv("2-I2", t, mk_ty(TyTwo{})); }
        if (auto* n = tm_as<TmTensor>(t)) {
            DerivP da = infer(n->a);
            DerivP db = infer(n->b);
            mark("(x)-I");
            DerivP d = mk_deriv("(x)-I", mk_tm(TmTensor{da->term, db->term}, sp),
                                mk_ty(TyTensor{da->ty, db->ty}));
            d->kids = {da, db};
            d->sev = {0, 0};
            d->has_absorber = da->has_absorber || db->has_absorber;
            return d;
        }
        if (auto* n = tm_as<TmSigmaPair>(t)) {
            if (!n->sigma) fail("Sg-I: dependent pair needs a type annotation", sp, "Sg-I");
            TyP want = check_type(n->sigma);
            auto* sg = ty_as<TySigma>(want);
            if (!sg) fail("Sg-I: annotation is not a Sigma type", sp, "Sg-I");
            return sigma_pair(n->a, n->b, want, *sg, sp);
        }
        if (auto* n = tm_as<TmBang>(t)) {
            lin_.push_frame(true, "!-I");
            DerivP da = infer(n->a);
            lin_.pop_frame();
            mark("!-I");
            DerivP d = mk_deriv("!-I", mk_tm(TmBang{da->term}, sp), mk_ty(TyBang{da->ty}));
            d->kids = {da};
            d->sev = {1};
            return d;
        }
        if (auto* n = tm_as<TmLam>(t)) {
            if (!n->dom) fail("-o-I: lambda needs a domain annotation", sp, "-o-I");
            TyP dom = check_type(n->dom);
            std::string x = fresh(n->hint);
            lin_.push_frame(false, "");
            long id = lin_.push(x, dom).id;
            mark("Lin-C-Ext");
            DerivP db = infer(open_tm1(n->body, var(Sort::Lin, x)));
            settle(db, *lin_.by_id(id), "-o-I", sp);
            lin_.pop_frame();
            mark("-o-I");
            DerivP d = mk_deriv("-o-I",
                                mk_tm(TmLam{n->hint, dom, close_tm(db->term, {{Sort::Lin, x}}, 0)}, sp),
                                mk_ty(TyLolli{dom, db->ty}));
            d->kids = {db};
            d->sev = {0};
            d->opened = {x};
            d->bound = {id};
            d->has_absorber = db->has_absorber;
            return d;
        }
        if (auto* n = tm_as<TmPiLam>(t)) {
            if (!n->dom) fail("Pi-I: lambda needs a domain annotation", sp, "Pi-I");
            TyP dom = check_type(n->dom);
            std::string x = fresh(n->hint);
            push_int(x, dom);
            mark("Int-C-Ext");
            DerivP db = infer(open_tm1(n->body, var(Sort::Int, x)));
            pop_int(x);
            mark("Pi-I");
            DerivP d = mk_deriv("Pi-I",
                                mk_tm(TmPiLam{n->hint, dom, close_tm(db->term, {{Sort::Int, x}}, 0)}, sp),
                                mk_ty(TyPi{n->hint, dom, close_ty(db->ty, {{Sort::Int, x}}, 0)}));
            d->kids = {db};
            d->sev = {0};
            d->opened = {x};
            d->has_absorber = db->has_absorber;
            return d;
        }
        if (auto* n = tm_as<TmApp>(t)) {
            DerivP df = infer(n->f);
            if (auto* lo = ty_as<TyLolli>(df->ty)) {
                DerivP da = check(n->a, lo->a);
                mark("-o-E");
                DerivP d = mk_deriv("-o-E", mk_tm(TmApp{df->term, da->term}, sp), lo->b);
                d->kids = {df, da};
                d->sev = {0, 0};
                d->has_absorber = df->has_absorber || da->has_absorber;
                return d;
            }
            if (auto* pi = ty_as<TyPi>(df->ty)) {
                auto* bg = tm_as<TmBang>(n->a);
                if (!bg)
                    fail("Pi-E: argument of a dependent function must be of the form !a", sp,
                         "Pi-E");
                return pi_app(df, bg->a, sp);
            }
            fail("-o-E: applying a term of non-function type " + print_ty(df->ty), sp, "-o-E");
        }
        if (auto* n = tm_as<TmPiApp>(t)) {
            DerivP df = infer(n->f);
            if (!ty_as<TyPi>(df->ty))
                fail("Pi-E: applying a term of non-function type " + print_ty(df->ty), sp, "Pi-E");
            return pi_app(df, n->a, sp);
        }
        if (auto* n = tm_as<TmFst>(t)) {
            DerivP da = infer(n->t);
            auto* w = ty_as<TyWith>(da->ty);
            if (!w) fail("&-E1: projecting from non-product type " + print_ty(da->ty), sp, "&-E1");
            mark("&-E1");
            DerivP d = mk_deriv("&-E1", mk_tm(TmFst{da->term}, sp), w->a);
            d->kids = {da};
            d->sev = {0};
            d->has_absorber = da->has_absorber;
            return d;
        }
        if (auto* n = tm_as<TmSnd>(t)) {
            DerivP da = infer(n->t);
            auto* w = ty_as<TyWith>(da->ty);
            if (!w) fail("&-E2: projecting from non-product type " + print_ty(da->ty), sp, "&-E2");
            mark("&-E2");
            DerivP d = mk_deriv("&-E2", mk_tm(TmSnd{da->term}, sp), w->b);
            d->kids = {da};
            d->sev = {0};
            d->has_absorber = da->has_absorber;
            return d;
        }
        if (auto* n = tm_as<TmInl>(t)) {
            if (!n->other) fail("(+)-I1: inl needs an annotation for the other summand", sp, "(+)-I1");
            TyP o = check_type(n->other);
            DerivP da = infer(n->t);
            mark("(+)-I1");
            DerivP d = mk_deriv("(+)-I1", mk_tm(TmInl{o, da->term}, sp), mk_ty(TyPlus{da->ty, o}));
            d->kids = {da};
            d->sev = {0};
            d->has_absorber = da->has_absorber;
            return d;
        }
        if (auto* n = tm_as<TmInr>(t)) {
            if (!n->other) fail("(+)-I2: inr needs an annotation for the other summand", sp, "(+)-I2");
            TyP o = check_type(n->other);
            DerivP da = infer(n->t);
            mark("(+)-I2");
            DerivP d = mk_deriv("(+)-I2", mk_tm(TmInr{o, da->term}, sp), mk_ty(TyPlus{o, da->ty}));
            d->kids = {da};
            d->sev = {0};
            d->has_absorber = da->has_absorber;
            return d;
        }
        if (auto* n = tm_as<TmRefl>(t)) {
            lin_.push_frame(true, "Id-I");
            DerivP da = infer(n->a);
            lin_.pop_frame();
            mark("Id-I");
            DerivP d = mk_deriv("Id-I", mk_tm(TmRefl{da->term}, sp),
                                mk_ty(TyId{da->ty, da->term, da->term}));
            d->kids = {da};
            d->sev = {1};
            return d;
        }
        if (tm_as<TmIdElim>(t)) return id_elim(t);
        switch (t->node.index()) {
            case tm_index<TmLetUnit>():
            case tm_index<TmLetTensor>():
            case tm_index<TmLetSigma>():
            case tm_index<TmLetBang>():
            case tm_index<TmCase>():
            case tm_index<TmIf>():
            case tm_index<TmAbort>():
                return elim(t, nullptr);
            default: break;
        }
        fail("cannot infer a type for this term", sp, "");
    }

    DerivP pi_app(const DerivP& df, const TmP& arg, Span sp) {
        auto* pi = ty_as<TyPi>(df->ty);
        lin_.push_frame(true, "Pi-E");
        DerivP da = check(arg, pi->dom);
        lin_.pop_frame();
        mark("Pi-E");
        mark("Int-Ty-Subst");
        DerivP d = mk_deriv("Pi-E", mk_tm(TmPiApp{df->term, da->term}, sp),
                            open_ty1(pi->body, da->term));
        d->kids = {df, da};
        d->sev = {0, 1};
        d->has_absorber = df->has_absorber;
        return d;
    }

    // Motive / expected type resolution for non-dependent eliminators.
    TyP elim_result(const TyP& motive, const TyP& want, const char* rule, Span sp) {
        if (motive) {
            TyP c = check_type(motive);
            if (want) need_type(c, want, rule, sp, "the motive");
            return c;
        }
        if (want) return want;
        return nullptr;  // caller infers from a branch
    }

    DerivP elim(const TmP& t, const TyP& want) {
        Span sp = t->span;
        if (auto* n = tm_as<TmLetUnit>(t)) {
            DerivP ds = check(n->scrut, mk_ty(TyUnit{}));
            TyP c = elim_result(n->motive, want, "I-E", sp);
            DerivP db = c ? check(n->body, c) : infer(n->body);
            if (!c) c = db->ty;
            mark("I-E");
            DerivP d = mk_deriv("I-E", mk_tm(TmLetUnit{c, ds->term, db->term}, sp), c);
            d->kids = {ds, db};
            d->sev = {0, 0};
            d->has_absorber = ds->has_absorber || db->has_absorber;
            return d;
        }
        if (auto* n = tm_as<TmLetTensor>(t)) {
            DerivP ds = infer(n->scrut);
            auto* tn = ty_as<TyTensor>(ds->ty);
            if (!tn)
                fail("(x)-E: scrutinee has type " + print_ty(ds->ty) + ", not a tensor", sp,
                     "(x)-E");
            TyP c = elim_result(n->motive, want, "(x)-E", sp);
            lin_.push_frame(false, "");
            std::string x = fresh(n->hx), y = fresh(n->hy);
            long ix = lin_.push(x, tn->a).id;
            long iy = lin_.push(y, tn->b).id;
            mark("Lin-C-Ext");
            TmP body = open_tm(n->body, {var(Sort::Lin, x), var(Sort::Lin, y)}, 0);
            DerivP db = c ? check(body, c) : infer(body);
            if (!c) c = db->ty;
            settle(db, *lin_.by_id(ix), "(x)-E", sp);
            settle(db, *lin_.by_id(iy), "(x)-E", sp);
            lin_.pop_frame();
            mark("(x)-E");
            DerivP d = mk_deriv(
                "(x)-E",
                mk_tm(TmLetTensor{c, ds->term, n->hx, n->hy,
                                  close_tm(db->term, {{Sort::Lin, x}, {Sort::Lin, y}}, 0)}, sp),
                c);
            d->kids = {ds, db};
            d->sev = {0, 0};
            d->opened = {x, y};
            d->bound = {ix, iy};
            d->has_absorber = ds->has_absorber || db->has_absorber;
            return d;
        }
        if (auto* n = tm_as<TmLetSigma>(t)) {
            DerivP ds = infer(n->scrut);
            auto* sg = ty_as<TySigma>(ds->ty);
            if (!sg)
                fail("Sg-E: scrutinee has type " + print_ty(ds->ty) + ", not a Sigma type", sp,
                     "Sg-E");
            TyP c = elim_result(n->motive, want, "Sg-E", sp);
            std::string x = fresh(n->hx);
            push_int(x, sg->dom);
            mark("Int-C-Ext");
            lin_.push_frame(false, "");
            std::string y = fresh(n->hy);
            long iy = lin_.push(y, open_ty1(sg->body, var(Sort::Int, x))).id;
            mark("Lin-C-Ext");
            TmP body = open_tm(n->body, {var(Sort::Int, x), var(Sort::Lin, y)}, 0);
            DerivP db = c ? check(body, c) : infer(body);
            if (!c) {
                if (uses_free_ty(db->ty, Sort::Int, x))
                    fail("Sg-E: inferred type depends on the bound variable '" + n->hx + "'", sp,
                         "Sg-E");
                c = db->ty;
            }
            settle(db, *lin_.by_id(iy), "Sg-E", sp);
            lin_.pop_frame();
            pop_int(x);
            mark("Sg-E");
            DerivP d = mk_deriv(
                "Sg-E",
                mk_tm(TmLetSigma{c, ds->term, n->hx, n->hy,
                                 close_tm(db->term, {{Sort::Int, x}, {Sort::Lin, y}}, 0)}, sp),
                c);
            d->kids = {ds, db};
            d->sev = {0, 0};
            d->opened = {x, y};
            d->bound = {iy};
            d->has_absorber = ds->has_absorber || db->has_absorber;
            return d;
        }
        if (auto* n = tm_as<TmLetBang>(t)) {
            DerivP ds = infer(n->scrut);
            auto* bg = ty_as<TyBang>(ds->ty);
            if (!bg)
                fail("!-E: scrutinee has type " + print_ty(ds->ty) + ", not a !-type", sp, "!-E");
            TyP c = elim_result(n->motive, want, "!-E", sp);
            std::string x = fresh(n->hx);
            push_int(x, bg->a);
            mark("Int-C-Ext");
            TmP body = open_tm1(n->body, var(Sort::Int, x));
            DerivP db = c ? check(body, c) : infer(body);
            if (!c) {
                if (uses_free_ty(db->ty, Sort::Int, x))
                    fail("!-E: inferred type depends on the bound variable '" + n->hx + "'", sp,
                         "!-E");
                c = db->ty;
            }
            pop_int(x);
            mark("!-E");
            DerivP d = mk_deriv(
                "!-E", mk_tm(TmLetBang{c, ds->term, n->hx, close_tm(db->term, {{Sort::Int, x}}, 0)}, sp),
                c);
            d->kids = {ds, db};
            d->sev = {0, 0};
            d->opened = {x};
            d->has_absorber = ds->has_absorber || db->has_absorber;
            return d;
        }
        if (auto* n = tm_as<TmCase>(t)) {
            DerivP ds = infer(n->scrut);
            auto* pl = ty_as<TyPlus>(ds->ty);
            if (!pl)
                fail("(+)-E: scrutinee has type " + print_ty(ds->ty) + ", not a sum", sp, "(+)-E");
            TyP c = elim_result(n->motive, want, "(+)-E", sp);
            if (!c) fail("(+)-E: case needs a motive annotation", sp, "(+)-E");
            std::string x = fresh(n->hx), y = fresh(n->hy);
            long ix = -1, iy = -1;
            auto [dl, ul] = additive([&] {
                lin_.push_frame(false, "");
                ix = lin_.push(x, pl->a).id;
                mark("Lin-C-Ext");
                DerivP b = check(open_tm1(n->left, var(Sort::Lin, x)), c);
                settle(b, *lin_.by_id(ix), "(+)-E", sp);
                lin_.pop_frame();
                return b;
            });
            auto [dr, ur] = additive([&] {
                lin_.push_frame(false, "");
                iy = lin_.push(y, pl->b).id;
                mark("Lin-C-Ext");
                DerivP b = check(open_tm1(n->right, var(Sort::Lin, y)), c);
                settle(b, *lin_.by_id(iy), "(+)-E", sp);
                lin_.pop_frame();
                return b;
            });
            equalize(dl, ul, dr, ur, "(+)-E", sp);
            mark("(+)-E");
            DerivP d = mk_deriv("(+)-E",
                                mk_tm(TmCase{c, ds->term, n->hx, close_tm(dl->term, {{Sort::Lin, x}}, 0),
                                             n->hy, close_tm(dr->term, {{Sort::Lin, y}}, 0)}, sp),
                                c);
            d->kids = {ds, dl, dr};
            d->sev = {0, 0, 0};
            d->opened = {x, y};
            d->bound = {ix, iy};
            d->has_absorber = ds->has_absorber || (dl->has_absorber && dr->has_absorber);
            return d;
        }
        if (auto* n = tm_as<TmIf>(t)) return if_elim(*n, want, sp);
        if (auto* n = tm_as<TmAbort>(t)) {
            DerivP ds = check(n->scrut, mk_ty(TyZero{}));
            TyP c = elim_result(n->motive, want, "0-E", sp);
            if (!c) fail("0-E: abort needs a motive annotation", sp, "0-E");
            mark("0-E");
            DerivP d = mk_deriv("0-E", mk_tm(TmAbort{c, ds->term}, sp), c);
            d->kids = {ds};
            d->sev = {0};
            d->has_absorber = true;
            return d;
        }
        assert(false && "elim: not an eliminator");
        fail("internal: not an eliminator", sp, "");
    }

    // 2-E.  The scrutinee is judged without linear resources; the motive may
    // depend on it, in which case the branches check at its instances and the
    // whole expression returns the instance at the scrutinee itself.
    DerivP if_elim(const TmIf& n, const TyP& want, Span sp) {
        lin_.push_frame(true, "2-E");
        DerivP ds = check(n.scrut, mk_ty(TyTwo{}));
        lin_.pop_frame();
        TyP motive;  // one Int slot over 2, when dependent
        TyP cthn, cels, cres;
        bool dependent = n.motive && !n.hz.empty();
        if (dependent) {
            std::string z = fresh(n.hz);
            push_int(z, mk_ty(TyTwo{}));
            mark("Int-C-Ext");
            TyP m = check_type(open_ty1(n.motive, var(Sort::Int, z)));
            pop_int(z);
            motive = close_ty(m, {{Sort::Int, z}}, 0);
            cthn = open_ty1(motive, mk_tm(TmTt{}));
            cels = open_ty1(motive, mk_tm(TmFf{}));
            cres = open_ty1(motive, ds->term);
            mark("Int-Ty-Subst");
            if (want) need_type(cres, want, "2-E", sp, "the motive instance");
        } else {
            TyP c = elim_result(n.motive, want, "2-E", sp);
            if (!c) fail("2-E: if needs a motive annotation", sp, "2-E");
            motive = c;  // closed, slot unused
            cthn = cels = cres = c;
        }
        auto [dt, ut] = additive([&] { return check(n.thn, cthn); });
        auto [de, ue] = additive([&] { return check(n.els, cels); });
        equalize(dt, ut, de, ue, "2-E", sp);
        mark("2-E");
        DerivP d = mk_deriv("2-E",
                            mk_tm(TmIf{n.hz, motive, ds->term, dt->term, de->term}, sp), cres);
        d->kids = {ds, dt, de};
        d->sev = {1, 0, 0};
        d->has_absorber = dt->has_absorber && de->has_absorber;
        return d;
    }

    // Id-E.  Endpoints and branch live behind severed boundaries; the
    // telescope variables are ambient linear resources consumed here, whose
    // types must be instances (at the left endpoint) of declared families.
    DerivP id_elim(const TmP& t) {
        auto* n = tm_as<TmIdElim>(t);
        Span sp = t->span;
        lin_.push_frame(true, "Id-E");
        DerivP da = infer(n->a);
        DerivP da2 = check(n->a2, da->ty);
        lin_.pop_frame();
        TyP A = da->ty;

        DerivP dp = check(n->p, mk_ty(TyId{A, da->term, da2->term}));

        if (!n->motive) fail("Id-E: idelim needs a motive", sp, "Id-E");
        std::string mx = fresh(n->hx), mx2 = fresh(n->hx2);
        push_int(mx, A);
        push_int(mx2, A);
        mark("Int-C-Ext");
        TyP m = check_type(open_ty(n->motive, {var(Sort::Int, mx), var(Sort::Int, mx2)}, 0));
        pop_int(mx2);
        pop_int(mx);
        TyP motive = close_ty(m, {{Sort::Int, mx}, {Sort::Int, mx2}}, 0);

        // Telescope: validate each family over z, then consume the ambient
        // variable at its left-endpoint instance.
        std::vector<IdTeleEntry> tele;
        for (auto& e : n->tele) {
            std::string z = fresh(n->hz.empty() ? "z" : n->hz);
            push_int(z, A);
            TyP tz = check_type(open_ty1(e.ty, var(Sort::Int, z)));
            pop_int(z);
            TyP fam = close_ty(tz, {{Sort::Int, z}}, 0);
            std::string hidden;
            LinearEnv::Entry* en = lin_.lookup(e.var, &hidden);
            if (!en)
                fail("Id-E: unknown linear variable '" + e.var + "' in the telescope", sp, "Id-E");
            if (!hidden.empty())
                fail(hidden + ": linear variable '" + e.var + "' is not available here", sp, hidden);
            TyP at_a = open_ty1(fam, da->term);
            mark("Int-Ty-Subst");
            need_type(en->ty, at_a, "Id-E", sp, "telescope variable '" + e.var + "'");
            consume(e.var, sp);
            tele.push_back({e.var, fam});
        }

        // Branch: fresh severed frame with copies of the telescope over z.
        std::string z = fresh(n->hz);
        push_int(z, A);
        mark("Int-C-Ext");
        lin_.push_frame(true, "Id-E");
        std::vector<long> wids;
        for (auto& e : tele) {
            wids.push_back(lin_.push(e.var, open_ty1(e.ty, var(Sort::Int, z))).id);
            mark("Lin-C-Ext");
        }
        TyP goal = open_ty(motive, {var(Sort::Int, z), var(Sort::Int, z)}, 0);
        DerivP db = check(open_tm1(n->branch, var(Sort::Int, z)), goal);
        for (long id : wids) settle(db, *lin_.by_id(id), "Id-E", sp);
        lin_.pop_frame();
        pop_int(z);

        TyP cres = open_ty(motive, {da->term, da2->term}, 0);
        mark("Id-E");
        mark("Int-Ty-Subst");
        mark("Int-Tm-Subst");
        DerivP d = mk_deriv(
            "Id-E",
            mk_tm(TmIdElim{n->hx, n->hx2, motive, tele, n->hz,
                           close_tm(db->term, {{Sort::Int, z}}, 0), da->term, da2->term, dp->term},
                  sp),
            cres);
        d->kids = {da, da2, dp, db};
        d->sev = {1, 1, 0, 1};
        d->opened = {z};
        d->bound = wids;
        d->has_absorber = dp->has_absorber;
        return d;
    }

    friend struct DirectiveRunner;
};

// ---------------------------------------------------------------------------
// Directives
// ---------------------------------------------------------------------------

struct DirectiveResult {
    std::string name;
    std::string verdict;   // ok | eq-true | eq-false | eq-undecided
                           // | iso-ok | iso-false | iso-undecided | reject:RULE
    bool ok = true;        // false: rejected with `err`
    Diagnostic err;
    DerivP d1, d2;         // term / lhs+rhs / f+g
    TyP ty, ty2;
    DualContext ctx;       // elaborated
    Verdict eqv = Verdict::True;
    const Decl* decl = nullptr;
};

inline DirectiveResult run_directive(const Signature& sig, const Decl& dc, Coverage* cov = nullptr) {
    DirectiveResult r;
    r.name = dc.name;
    r.decl = &dc;
    try {
        switch (dc.kind) {
            case Decl::Type: {
                Checker c(sig, dc.mode, cov);
                for (auto& e : dc.tele) c.push_int(e.name, c.check_type(e.ty));
                r.verdict = "ok";
                break;
            }
            case Decl::Const: {
                Checker c(sig, dc.mode, cov);
                for (auto& e : dc.tele) c.push_int(e.name, c.check_type(e.ty));
                r.ty = c.check_type(dc.const_ty);
                r.verdict = "ok";
                break;
            }
            case Decl::Def:
            case Decl::Check: {
                Checker c(sig, dc.mode, cov);
                r.ctx = c.check_context(dc.ctx);
                r.ty = c.check_type(dc.ty);
                r.d1 = c.check_term(dc.term, r.ty);
                r.verdict = "ok";
                break;
            }
            case Decl::Eq: {
                {
                    Checker c1(sig, dc.mode, cov);
                    r.ctx = c1.check_context(dc.ctx);
                    r.ty = c1.check_type(dc.ty);
                    r.d1 = c1.check_term(dc.term, r.ty);
                }
                Checker c2(sig, dc.mode, cov);
                c2.check_context(dc.ctx);
                r.d2 = c2.check_term(dc.term2, r.ty);
                r.eqv = c2.terms_equal(r.d1->term, r.d2->term, r.ty, dc.mode);
                r.verdict = r.eqv == Verdict::True    ? "eq-true"
                            : r.eqv == Verdict::False ? "eq-false"
                                                      : "eq-undecided";
                break;
            }
            case Decl::Iso: {
                if (!dc.ctx.linc.empty())
                    fail("iso: the ambient context must be intuitionistic", dc.span, "Lin-C-Ext");
                TyP A, B;
                {
                    Checker c0(sig, dc.mode, cov);
                    r.ctx = c0.check_context(dc.ctx);
                    A = c0.check_type(dc.ty);
                    B = c0.check_type(dc.ty2);
                }
                r.ty = A;
                r.ty2 = B;
                DualContext fpctx = dc.ctx;
                fpctx.linc.push_back({dc.isox, A});
                Checker cf(sig, dc.mode, cov);
                cf.check_context(fpctx);
                r.d1 = cf.check_term(open_tm1(dc.isof, mk_tm(TmFVar{Sort::Lin, dc.isox})), B);
                DualContext gpctx = dc.ctx;
                gpctx.linc.push_back({dc.isoy, B});
                Checker cg(sig, dc.mode, cov);
                cg.check_context(gpctx);
                r.d2 = cg.check_term(open_tm1(dc.isog, mk_tm(TmFVar{Sort::Lin, dc.isoy})), A);

                TmP fcl = close_tm(r.d1->term, {{Sort::Lin, dc.isox}}, 0);
                TmP gcl = close_tm(r.d2->term, {{Sort::Lin, dc.isoy}}, 0);
                TmP xv = mk_tm(TmFVar{Sort::Lin, dc.isox});
                TmP yv = mk_tm(TmFVar{Sort::Lin, dc.isoy});
                TmP gf = open_tm1(gcl, open_tm1(fcl, xv));  // g[f[x]/y] : A
                TmP fg = open_tm1(fcl, open_tm1(gcl, yv));  // f[g[y]/x] : B
                if (cov) cov->mark("Lin-Tm-Subst");

                DualContext e1 = dc.ctx;
                e1.linc.push_back({dc.isox, A});
                EqEngine eng1(&sig, e1, dc.mode, cov);
                Verdict v1 = eng1.term_eq(gf, xv, A);
                DualContext e2 = dc.ctx;
                e2.linc.push_back({dc.isoy, B});
                EqEngine eng2(&sig, e2, dc.mode, cov);
                Verdict v2 = eng2.term_eq(fg, yv, B);
                r.eqv = (v1 == Verdict::True && v2 == Verdict::True) ? Verdict::True
                        : (v1 == Verdict::False || v2 == Verdict::False) ? Verdict::False
                                                                         : Verdict::Undecided;
                r.verdict = r.eqv == Verdict::True    ? "iso-ok"
                            : r.eqv == Verdict::False ? "iso-false"
                                                      : "iso-undecided";
                break;
            }
        }
    } catch (const TypeError& e) {
        r.ok = false;
        r.err = e.diag;
        r.err.decl = dc.name;
        r.verdict = "reject:" + (e.diag.rule.empty() ? std::string("?") : e.diag.rule);
    }
    return r;
}

}  // namespace ildtt
