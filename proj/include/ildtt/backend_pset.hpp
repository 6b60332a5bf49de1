// Finite pointed sets with the smash product.
//
// Objects are sizes: the set {0..n-1} with basepoint 0.  The smash product is
// strictified by a mixed-radix encoding of the non-basepoint part, so tensor
// is associative on the nose and I (the two-point set) is a strict unit.
// Internal hom is the pointed function space, products are cartesian,
// coproducts are wedges.  The zero object {*} makes zero morphisms available
// everywhere, which interprets 0-E and mismatched Id fibres.

#pragma once

#include <cassert>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace ildtt {

struct PsetBackend {
    static const char* name() { return "pset"; }

    struct Obj {
        int n = 1;  // number of points, basepoint 0
        bool operator==(const Obj& o) const { return n == o.n; }
    };
    struct Mor {
        Obj dom, cod;
        std::vector<int> map;  // map[0] == 0
        bool operator==(const Mor& o) const {
            return dom == o.dom && cod == o.cod && map == o.map;
        }
    };

    static Obj unit() { return {2}; }
    static Obj top() { return {1}; }
    static Obj zero() { return {1}; }

    static Obj tensor(Obj a, Obj b) { return {(a.n - 1) * (b.n - 1) + 1}; }
    static Obj hom(Obj a, Obj b) { return {ipow(b.n, a.n - 1)}; }
    static Obj sum(const std::vector<Obj>& cs) {
        int n = 1;
        for (auto& c : cs) n += c.n - 1;
        return {n};
    }
    static Obj prod(const std::vector<Obj>& cs) {
        int n = 1;
        for (auto& c : cs) n *= c.n;
        return {n};
    }

    static size_t size(Obj a) { return (size_t)a.n; }

    template <class F>
    static Mor from_fn(Obj dom, Obj cod, F f) {
        Mor m{dom, cod, std::vector<int>(dom.n)};
        for (int i = 1; i < dom.n; ++i) m.map[i] = f(i);
        return m;
    }

    static Mor id(Obj a) {
        return from_fn(a, a, [](int i) { return i; });
    }
    static Mor compose(const Mor& g, const Mor& f) {
        assert(f.cod == g.dom);
        return from_fn(f.dom, g.cod, [&](int i) { return g.map[f.map[i]]; });
    }
    static Mor zero_mor(Obj a, Obj b) {
        return from_fn(a, b, [](int) { return 0; });
    }
    static bool eq(const Mor& a, const Mor& b) { return a == b; }

    // -- smash pairing ------------------------------------------------------

    static int pair_ix(Obj a, Obj b, int i, int j) {
        if (i == 0 || j == 0) return 0;
        return 1 + (i - 1) * (b.n - 1) + (j - 1);
    }
    static std::pair<int, int> unpair_ix(Obj a, Obj b, int x) {
        assert(x > 0);
        int r = x - 1;
        return {1 + r / (b.n - 1), 1 + r % (b.n - 1)};
    }

    static Mor tensor_mor(const Mor& f, const Mor& g) {
        Obj dom = tensor(f.dom, g.dom), cod = tensor(f.cod, g.cod);
        return from_fn(dom, cod, [&](int x) {
            auto [i, j] = unpair_ix(f.dom, g.dom, x);
            return pair_ix(f.cod, g.cod, f.map[i], g.map[j]);
        });
    }

    // Permutation of tensor factors: result reorders to fs[order[0]], ...
    static Mor perm(const std::vector<Obj>& fs, const std::vector<int>& order) {
        Obj dom = unit(), cod = unit();
        for (auto& f : fs) dom = tensor(dom, f);
        for (int k : order) cod = tensor(cod, fs[k]);
        return from_fn(dom, cod, [&](int x) {
            std::vector<int> digit(fs.size());
            int r = x - 1;
            for (size_t i = fs.size(); i-- > 0;) {
                int rad = fs[i].n - 1;
                digit[i] = 1 + r % rad;
                r /= rad;
            }
            int y = 0;
            for (int k : order) y = y * (fs[k].n - 1) + (digit[k] - 1);
            return y + 1;
        });
    }

    // -- wedge / product structure -----------------------------------------

    static int sum_off(const std::vector<Obj>& cs, int i) {
        int off = 0;
        for (int j = 0; j < i; ++j) off += cs[j].n - 1;
        return off;
    }
    static Mor inj(const std::vector<Obj>& cs, int i) {
        Obj s = sum(cs);
        int off = sum_off(cs, i);
        return from_fn(cs[i], s, [&](int x) { return off + x; });
    }
    static Mor cotuple(const std::vector<Obj>& cs, const std::vector<Mor>& fs) {
        assert(!fs.empty());
        Obj s = sum(cs), cod = fs[0].cod;
        return from_fn(s, cod, [&](int x) {
            int r = x - 1;
            for (size_t i = 0; i < cs.size(); ++i) {
                if (r < cs[i].n - 1) return fs[i].map[r + 1];
                r -= cs[i].n - 1;
            }
            assert(false);
            return 0;
        });
    }
    static Mor proj(const std::vector<Obj>& cs, int i) {
        Obj p = prod(cs);
        return from_fn(p, cs[i], [&](int x) {
            int r = x;
            int v = 0;
            for (size_t j = cs.size(); j-- > 0;) {
                int d = r % cs[j].n;
                r /= cs[j].n;
                if ((int)j == i) v = d;
            }
            return v;
        });
    }
    static Mor tuple(const std::vector<Obj>& cs, const std::vector<Mor>& fs) {
        assert(!fs.empty());
        Obj dom = fs[0].dom, p = prod(cs);
        Mor m{dom, p, std::vector<int>(dom.n)};
        for (int x = 0; x < dom.n; ++x) {
            int y = 0;
            for (size_t j = 0; j < cs.size(); ++j) y = y * cs[j].n + fs[j].map[x];
            m.map[x] = y;
        }
        assert(m.map[0] == 0);
        return m;
    }

    // X (x) (+)cs  ->  (+)(X (x) cs[i])
    static Mor dist(Obj x, const std::vector<Obj>& cs) {
        std::vector<Obj> tcs;
        for (auto& c : cs) tcs.push_back(tensor(x, c));
        Obj dom = tensor(x, sum(cs)), cod = sum(tcs);
        return from_fn(dom, cod, [&](int e) {
            auto [xi, s] = unpair_ix(x, sum(cs), e);
            int r = s - 1;
            for (size_t i = 0; i < cs.size(); ++i) {
                if (r < cs[i].n - 1)
                    return sum_off(tcs, (int)i) + pair_ix(x, cs[i], xi, r + 1);
                r -= cs[i].n - 1;
            }
            assert(false);
            return 0;
        });
    }

    // -- internal hom --------------------------------------------------------
    // An element of hom(A,B) encodes the images of 1..|A|-1 in mixed radix
    // base |B|; index 0 is the zero map.

    static int hom_apply(Obj a, Obj b, int h, int x) {
        if (x == 0) return 0;
        for (int i = a.n - 1; i > x; --i) h /= b.n;
        return h % b.n;
    }
    static Mor eval_mor(Obj a, Obj b) {
        Obj h = hom(a, b);
        return from_fn(tensor(h, a), b, [&](int e) {
            auto [hi, x] = unpair_ix(h, a, e);
            return hom_apply(a, b, hi, x);
        });
    }
    static Mor curry(const Mor& f, Obj x, Obj a, Obj b) {
        assert(f.dom == tensor(x, a) && f.cod == b);
        return from_fn(x, hom(a, b), [&](int xi) {
            int h = 0;
            for (int y = 1; y < a.n; ++y) h = h * b.n + f.map[pair_ix(x, a, xi, y)];
            return h;
        });
    }

    // -- points --------------------------------------------------------------

    static std::vector<Mor> points(Obj a) {
        std::vector<Mor> ps;
        for (int k = 0; k < a.n; ++k) ps.push_back(Mor{unit(), a, {0, k}});
        return ps;
    }

    static std::string show(Obj a) { return std::to_string(a.n) + " points"; }
    static std::string show(const Mor& m) {
        std::string s = "[";
        for (int i = 0; i < m.dom.n; ++i) s += (i ? " " : "") + std::to_string(m.map[i]);
        return s + "]";
    }

    static bool invert(const Mor& f, Mor& out) {
        if (f.dom.n != f.cod.n) return false;
        std::vector<int> inv(f.cod.n, -1);
        for (int i = 0; i < f.dom.n; ++i) {
            if (inv[f.map[i]] != -1) return false;
            inv[f.map[i]] = i;
        }
        out = Mor{f.cod, f.dom, inv};
        return true;
    }

private:
    static int ipow(int b, int e) {
        int r = 1;
        while (e-- > 0) r *= b;
        return r;
    }
};

}  // namespace ildtt
