// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_SCRIPT_HPP
#define FUSESIM_SCRIPT_HPP

#include <fusesim/crypto.hpp>
#include <fusesim/digest.hpp>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace fusesim {

/** One witness stack item. `Omitted` is an explicitly absent argument.
 *  `Pad` items are inert: they are stripped before slot indexing and are
 *  ignored by evaluation, but they are part of the full transaction
 *  encoding, which is what makes witnesses a malleation channel. */
struct WitnessItem {
    enum class Kind : std::uint8_t { Omitted = 0, Sig = 1, Secret = 2, Pad = 3 };

    Kind kind = Kind::Omitted;
    Signature sig;                   // Kind::Sig
    std::vector<std::uint8_t> data;  // Kind::Secret / Kind::Pad

    static WitnessItem omitted() { return {}; }
    static WitnessItem from_sig(Signature s);
    static WitnessItem secret(std::vector<std::uint8_t> bytes);
    static WitnessItem secret(std::string_view bytes);
    static WitnessItem pad(std::vector<std::uint8_t> bytes);

    bool operator==(const WitnessItem&) const = default;
};

using Witness = std::vector<WitnessItem>;

/** Thrown when evaluation consults a slot past the end of the (pad-stripped)
 *  witness. Structural, distinct from the script evaluating to false. */
struct SlotOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/** Output script: a boolean combination of signature checks and
 *  hash-preimage checks over a declared number of witness slots.
 *
 *  Invariants, enforced at construction:
 *   - every leaf slot index is below the declared arity,
 *   - AllOf / AnyOf nodes have at least two children.
 */
class Script {
public:
    enum class NodeKind : std::uint8_t { CheckSig = 1, CheckHash = 2, AllOf = 3, AnyOf = 4 };

    struct Node {
        NodeKind kind = NodeKind::CheckSig;
        KeyId key{};                 // CheckSig
        Digest expected{};           // CheckHash
        std::uint32_t slot = 0;      // leaves
        std::vector<Node> children;  // AllOf / AnyOf

        static Node check_sig(KeyId key, std::uint32_t slot);
        static Node check_hash(Digest expected, std::uint32_t slot);
        static Node all_of(std::vector<Node> children);
        static Node any_of(std::vector<Node> children);

        bool operator==(const Node&) const = default;
    };

    Script() = default;
    Script(std::uint32_t arity, Node root);  // throws std::invalid_argument

    std::uint32_t arity() const { return m_arity; }
    const Node& root() const { return m_root; }

    /** Single signature check in slot 0, arity 1: the plain ownership script
     *  used for funding and settlement outputs. */
    static Script pay_to_key(const KeyId& key);
    bool is_pay_to_key() const;
    bool is_pay_to_key(const KeyId& key) const;

    bool operator==(const Script&) const = default;

private:
    std::uint32_t m_arity = 0;
    Node m_root;
};

/** Strict boolean evaluation of a script against a witness and the body
 *  digest of the spending transaction. Pad items are stripped first; an
 *  Omitted item in a consulted slot makes that leaf false. Throws
 *  SlotOutOfRange when the stripped witness is shorter than the arity. */
bool eval_script(const Script& script, std::span<const WitnessItem> witness, const Digest& body);

} // namespace fusesim

#endif // FUSESIM_SCRIPT_HPP
