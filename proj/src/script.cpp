// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/script.hpp>

#include <utility>

namespace fusesim {

WitnessItem WitnessItem::from_sig(Signature s)
{
    WitnessItem item;
    item.kind = Kind::Sig;
    item.sig = std::move(s);
    return item;
}

WitnessItem WitnessItem::secret(std::vector<std::uint8_t> bytes)
{
    WitnessItem item;
    item.kind = Kind::Secret;
    item.data = std::move(bytes);
    return item;
}

WitnessItem WitnessItem::secret(std::string_view bytes)
{
    return secret(std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
}

WitnessItem WitnessItem::pad(std::vector<std::uint8_t> bytes)
{
    WitnessItem item;
    item.kind = Kind::Pad;
    item.data = std::move(bytes);
    return item;
}

Script::Node Script::Node::check_sig(KeyId key, std::uint32_t slot)
{
    Node n;
    n.kind = NodeKind::CheckSig;
    n.key = key;
    n.slot = slot;
    return n;
}

Script::Node Script::Node::check_hash(Digest expected, std::uint32_t slot)
{
    Node n;
    n.kind = NodeKind::CheckHash;
    n.expected = expected;
    n.slot = slot;
    return n;
}

Script::Node Script::Node::all_of(std::vector<Node> children)
{
    Node n;
    n.kind = NodeKind::AllOf;
    n.children = std::move(children);
    return n;
}

Script::Node Script::Node::any_of(std::vector<Node> children)
{
    Node n;
    n.kind = NodeKind::AnyOf;
    n.children = std::move(children);
    return n;
}

namespace {

void check_node(const Script::Node& node, std::uint32_t arity)
{
    switch (node.kind) {
    case Script::NodeKind::CheckSig:
    case Script::NodeKind::CheckHash:
        if (node.slot >= arity) {
            throw std::invalid_argument("script leaf references slot " +
                                        std::to_string(node.slot) + " beyond arity " +
                                        std::to_string(arity));
        }
        if (!node.children.empty()) {
            throw std::invalid_argument("script leaf with children");
        }
        return;
    case Script::NodeKind::AllOf:
    case Script::NodeKind::AnyOf:
        if (node.children.size() < 2) {
            throw std::invalid_argument("script combinator needs at least two children");
        }
        for (const auto& child : node.children) {
            check_node(child, arity);
        }
        return;
    }
    throw std::invalid_argument("unknown script node kind");
}

bool eval_node(const Script::Node& node, std::span<const WitnessItem> stripped,
               const Digest& body)
{
    switch (node.kind) {
    case Script::NodeKind::CheckSig: {
        if (node.slot >= stripped.size()) {
            throw SlotOutOfRange("witness slot " + std::to_string(node.slot) +
                                 " out of range");
        }
        const WitnessItem& item = stripped[node.slot];
        if (item.kind != WitnessItem::Kind::Sig) return false;
        return verify(node.key, body, item.sig);
    }
    case Script::NodeKind::CheckHash: {
        if (node.slot >= stripped.size()) {
            throw SlotOutOfRange("witness slot " + std::to_string(node.slot) +
                                 " out of range");
        }
        const WitnessItem& item = stripped[node.slot];
        if (item.kind != WitnessItem::Kind::Secret) return false;
        return hash(item.data) == node.expected;
    }
    case Script::NodeKind::AllOf: {
        // Strict: every child is evaluated, structural errors are never
        // masked by a sibling's value.
        bool all = true;
        for (const auto& child : node.children) {
            all = eval_node(child, stripped, body) && all;
        }
        return all;
    }
    case Script::NodeKind::AnyOf: {
        bool any = false;
        for (const auto& child : node.children) {
            any = eval_node(child, stripped, body) || any;
        }
        return any;
    }
    }
    return false;
}

} // namespace

Script::Script(std::uint32_t arity, Node root) : m_arity(arity), m_root(std::move(root))
{
    check_node(m_root, m_arity);
}

Script Script::pay_to_key(const KeyId& key)
{
    return Script(1, Node::check_sig(key, 0));
}

bool Script::is_pay_to_key() const
{
    return m_arity == 1 && m_root.kind == NodeKind::CheckSig && m_root.slot == 0;
}

bool Script::is_pay_to_key(const KeyId& key) const
{
    return is_pay_to_key() && m_root.key == key;
}

bool eval_script(const Script& script, std::span<const WitnessItem> witness, const Digest& body)
{
    std::vector<WitnessItem> stripped;
    stripped.reserve(witness.size());
    for (const auto& item : witness) {
        if (item.kind != WitnessItem::Kind::Pad) {
            stripped.push_back(item);
        }
    }
    if (stripped.size() < script.arity()) {
        throw SlotOutOfRange("witness provides " + std::to_string(stripped.size()) +
                             " slots, script declares " + std::to_string(script.arity()));
    }
    return eval_node(script.root(), stripped, body);
}

} // namespace fusesim
