// Size-augmented treap keyed by ordered keys: rank, k-th element, insert,
// erase, predecessor/successor, all logarithmic. Priorities come from a fixed
// deterministic generator so runs reproduce exactly.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace wsp3d {

template <class Key, class Value>
class OrderStatTree {
    struct Node {
        Key key;
        Value val;
        uint64_t prio;
        int size = 1;
        Node* l = nullptr;
        Node* r = nullptr;
    };

public:
    OrderStatTree() = default;
    ~OrderStatTree() { clear(root_); }
    OrderStatTree(const OrderStatTree&) = delete;
    OrderStatTree& operator=(const OrderStatTree&) = delete;
    OrderStatTree(OrderStatTree&& o) noexcept : root_(o.root_), rng_(o.rng_) { o.root_ = nullptr; }
    OrderStatTree& operator=(OrderStatTree&& o) noexcept {
        if (this != &o) {
            clear(root_);
            root_ = o.root_;
            rng_ = o.rng_;
            o.root_ = nullptr;
        }
        return *this;
    }

    int size() const { return sz(root_); }
    bool empty() const { return root_ == nullptr; }

    // Inserts or overwrites.
    void insert(const Key& k, const Value& v) {
        Node* existing = find_node(root_, k);
        if (existing) {
            existing->val = v;
            return;
        }
        Node* n = new Node{k, v, next_prio()};
        Node *a, *b;
        split(root_, k, a, b);
        root_ = merge(merge(a, n), b);
    }

    bool erase(const Key& k) {
        return erase_rec(root_, k);
    }

    Value* find(const Key& k) {
        Node* n = find_node(root_, k);
        return n ? &n->val : nullptr;
    }

    // 0-based k-th smallest key.
    std::pair<Key, Value*> kth(int i) {
        Node* n = root_;
        while (n) {
            int ls = sz(n->l);
            if (i < ls)
                n = n->l;
            else if (i == ls)
                return {n->key, &n->val};
            else {
                i -= ls + 1;
                n = n->r;
            }
        }
        return {Key{}, nullptr};
    }

    // Number of keys strictly less than k.
    int rank(const Key& k) const {
        int r = 0;
        Node* n = root_;
        while (n) {
            if (k <= n->key)
                n = n->l;
            else {
                r += sz(n->l) + 1;
                n = n->r;
            }
        }
        return r;
    }

    // Greatest key <= k with its value, in a single descent; {nullptr,nullptr}
    // when every key exceeds k.
    std::pair<const Key*, Value*> floor_entry(const Key& k) const {
        Node* n = root_;
        Node* best = nullptr;
        while (n) {
            if (!(k < n->key)) {
                best = n;
                n = n->r;
            } else
                n = n->l;
        }
        if (!best) return {nullptr, nullptr};
        return {&best->key, &best->val};
    }

    // Greatest key strictly less than k.
    const Key* predecessor(const Key& k) const {
        Node* n = root_;
        const Key* best = nullptr;
        while (n) {
            if (n->key < k) {
                best = &n->key;
                n = n->r;
            } else
                n = n->l;
        }
        return best;
    }

    // Smallest key strictly greater than k.
    const Key* successor(const Key& k) const {
        Node* n = root_;
        const Key* best = nullptr;
        while (n) {
            if (k < n->key) {
                best = &n->key;
                n = n->l;
            } else
                n = n->r;
        }
        return best;
    }

    template <class F>
    void for_each(F&& f) const {
        walk(root_, f);
    }

private:
    static int sz(Node* n) { return n ? n->size : 0; }
    static void pull(Node* n) { n->size = 1 + sz(n->l) + sz(n->r); }

    static void split(Node* n, const Key& k, Node*& a, Node*& b) {
        if (!n) {
            a = b = nullptr;
            return;
        }
        if (n->key < k) {
            split(n->r, k, n->r, b);
            a = n;
            pull(a);
        } else {
            split(n->l, k, a, n->l);
            b = n;
            pull(b);
        }
    }

    static Node* merge(Node* a, Node* b) {
        if (!a) return b;
        if (!b) return a;
        if (a->prio > b->prio) {
            a->r = merge(a->r, b);
            pull(a);
            return a;
        }
        b->l = merge(a, b->l);
        pull(b);
        return b;
    }

    static Node* find_node(Node* n, const Key& k) {
        while (n) {
            if (k < n->key)
                n = n->l;
            else if (n->key < k)
                n = n->r;
            else
                return n;
        }
        return nullptr;
    }

    bool erase_rec(Node*& n, const Key& k) {
        if (!n) return false;
        if (k < n->key) {
            if (!erase_rec(n->l, k)) return false;
        } else if (n->key < k) {
            if (!erase_rec(n->r, k)) return false;
        } else {
            Node* dead = n;
            n = merge(n->l, n->r);
            delete dead;
            return true;
        }
        pull(n);
        return true;
    }

    static void clear(Node* n) {
        if (!n) return;
        clear(n->l);
        clear(n->r);
        delete n;
    }

    template <class F>
    static void walk(Node* n, F& f) {
        if (!n) return;
        walk(n->l, f);
        f(n->key, n->val);
        walk(n->r, f);
    }

    uint64_t next_prio() {
        // splitmix64 step
        rng_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = rng_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    Node* root_ = nullptr;
    uint64_t rng_ = 0x5DEECE66DULL;
};

}  // namespace wsp3d
