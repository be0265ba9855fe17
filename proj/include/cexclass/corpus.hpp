#pragma once

#include "parser.hpp"

namespace cexclass {
namespace corpus {

// Sources of the bundled models. The same text is shipped under corpus/
// as .ccm/.ccp files; a test keeps the two in sync.

inline constexpr const char* counter_ccm = R"MODEL(-- Bounded counter: a starts at 1 and is nondeterministically incremented
-- by 1, decremented by 1, or held constant at each step. The domain clamp
-- keeps the state space finite; traces short enough never reach it.
vars
  a: int[-3..3]

init a = 1

trans a' = a + 1 or a' = a - 1 or a' = a

invariant alwaysOne: a = 1

pred lessThanOne[x: int] { x < 1 }
pred greaterThanOne[x: int] { x > 1 }

predset counterPreds = lessThanOne, greaterThanOne
)MODEL";

inline constexpr const char* running_example_ccm = R"MODEL(-- Alice and Bob exchange messages that Eve can observe. Eve reads every
-- plaintext message; she reads encrypted messages once she holds the
-- shared key, which she obtains by breaking the encryption of the first
-- encrypted message she sees. Message fields are encoded into the state:
-- msg.* at position i describes the message received at step i. The
-- initial msg values are inert placeholders.
type Key = { NoKey, Kab }
type MsgType = { Plaintext, Encrypted }
type Principal = { Alice, Bob }

record Message { type: MsgType, sender: Principal, secret: bool }

vars
  EveKey: Key
  EveSeenSecret: bool
  msg: Message

init EveKey = NoKey and EveSeenSecret = false
  and msg.type = Plaintext and msg.sender = Alice and msg.secret = false

trans
  EveSeenSecret = false and (
    ( msg.type' = Plaintext
      and EveKey' = EveKey
      and EveSeenSecret' = (EveSeenSecret or msg.secret') )
    or
    ( msg.type' = Encrypted
      and EveKey' = Kab
      and EveSeenSecret' = (EveSeenSecret or (EveKey = Kab and msg.secret')) )
  )

invariant secrecy: EveSeenSecret = false
)MODEL";

inline constexpr const char* nsp_symmetric_ccm = R"MODEL(-- Needham-Schroeder symmetric-key protocol, desk-scale reconstruction.
-- One session, scripted through a phase counter:
--   0 request -> 1 key issued -> 2 ticket -> 3 challenge -> 4
-- The requester is chosen at the initial state: Alice runs the protocol
-- honestly, or Eve requests a session herself and the Server answers her
-- under Eve's server key, leaking the fresh session key.
-- After the challenge, the ticket can reappear on the wire: Eve replays
-- her recorded copy verbatim, or Alice retransmits it. Either way Bob
-- issues his challenge nonce a second time under the same session key,
-- and the nonce reuse lets Eve break the encryption and recover Kab.
type Principal = { Alice, Bob, Eve, Server }
type Nonce = { NoNonce, Na, Nb }
type Key = { NoKey, Kab, Kas, Kbs, Kes }

record Message { sender: Principal, process: Principal, nonce: Nonce, key: Key, encryption: Key }
record EveState { knows: set[Key] }

vars
  phase: int[0..4]
  requester: Principal
  msg: Message
  kabNonceUsed: bool
  Eve: EveState

init phase = 0 and (requester = Alice or requester = Eve)
  and msg.sender = Alice and msg.process = Alice and msg.nonce = NoNonce
  and msg.key = NoKey and msg.encryption = NoKey
  and kabNonceUsed = false and Eve.knows = {Kes}

trans
  (Kab notin Eve.knows) and requester' = requester and (
    -- request for a session with Bob
    ( phase = 0 and requester = Alice and phase' = 1
      and msg.sender' = Alice and msg.process' = Bob and msg.nonce' = Na
      and msg.key' = NoKey and msg.encryption' = NoKey
      and kabNonceUsed' = false and Eve.knows' = Eve.knows )
    or
    ( phase = 0 and requester = Eve and phase' = 1
      and msg.sender' = Eve and msg.process' = Bob and msg.nonce' = NoNonce
      and msg.key' = NoKey and msg.encryption' = NoKey
      and kabNonceUsed' = false and Eve.knows' = Eve.knows )
    or
    -- the Server issues the session key to the requester
    ( phase = 1 and requester = Alice and phase' = 2
      and msg.sender' = Server and msg.process' = Alice and msg.nonce' = Na
      and msg.key' = Kab and msg.encryption' = Kas
      and kabNonceUsed' = kabNonceUsed and Eve.knows' = Eve.knows )
    or
    ( phase = 1 and requester = Eve and phase' = 2
      and msg.sender' = Server and msg.process' = Eve and msg.nonce' = NoNonce
      and msg.key' = Kab and msg.encryption' = Kes
      and kabNonceUsed' = kabNonceUsed and Eve.knows' = Eve.knows union {Kab} )
    or
    -- Alice forwards the ticket to Bob
    ( phase = 2 and requester = Alice and phase' = 3
      and msg.sender' = Alice and msg.process' = Bob and msg.nonce' = NoNonce
      and msg.key' = Kab and msg.encryption' = Kbs
      and kabNonceUsed' = kabNonceUsed and Eve.knows' = Eve.knows )
    or
    -- Bob accepts the ticket and challenges with his nonce under Kab;
    -- a second challenge reuses the nonce and Eve breaks the key
    ( phase = 3 and kabNonceUsed = false and phase' = 4
      and msg.sender' = Bob and msg.process' = Alice and msg.nonce' = Nb
      and msg.key' = Kab and msg.encryption' = Kab
      and kabNonceUsed' = true and Eve.knows' = Eve.knows )
    or
    ( phase = 3 and kabNonceUsed = true and phase' = 4
      and msg.sender' = Bob and msg.process' = Alice and msg.nonce' = Nb
      and msg.key' = Kab and msg.encryption' = Kab
      and kabNonceUsed' = true and Eve.knows' = Eve.knows union {Kab} )
    or
    -- the ticket reappears: Eve replays her recorded copy verbatim
    ( phase = 4 and phase' = 3
      and msg.sender' = Eve and msg.process' = Bob and msg.nonce' = NoNonce
      and msg.key' = Kab and msg.encryption' = Kbs
      and kabNonceUsed' = kabNonceUsed and Eve.knows' = Eve.knows )
    or
    -- or Alice retransmits it herself
    ( phase = 4 and phase' = 3
      and msg.sender' = Alice and msg.process' = Bob and msg.nonce' = NoNonce
      and msg.key' = Kab and msg.encryption' = Kbs
      and kabNonceUsed' = kabNonceUsed and Eve.knows' = Eve.knows )
  )

invariant secrecy: Kab notin Eve.knows
)MODEL";

inline constexpr const char* nsp_public_key_ccm = R"MODEL(-- Needham-Schroeder public-key protocol, desk-scale reconstruction of the
-- Lowe attack setting. Alice opens a session with a partner of her choice
-- (Bob, or Eve as a legitimate acquaintance). When the partner is Eve she
-- can relay Alice's hello to Bob re-encrypted under Bob's public key and
-- let the handshake complete through her, or answer the hello herself.
-- Either way Alice's final confirmation is encrypted for her partner Eve
-- and carries the established session secret. In an honest session with
-- Bob the confirmation may also be sent unencrypted by mistake.
type Principal = { Alice, Bob, Eve, Server }
type Nonce = { NoNonce, Na, Nb, Ne }
type Key = { NoKey, PkA, PkB, PkE, Kab }

record Message { sender: Principal, process: Principal, nonce: Nonce, key: Key, encryption: Key }
record EveState { knows: set[Key] }

vars
  phase: int[0..4]
  partner: Principal
  msg: Message
  Eve: EveState

init phase = 0 and (partner = Bob or partner = Eve)
  and msg.sender = Alice and msg.process = Bob and msg.nonce = NoNonce
  and msg.key = NoKey and msg.encryption = NoKey
  and Eve.knows = {PkE}

trans
  (Kab notin Eve.knows) and partner' = partner and (
    -- Alice's hello, encrypted for her chosen partner
    ( phase = 0 and partner = Bob and phase' = 1
      and msg.sender' = Alice and msg.process' = Bob and msg.nonce' = Na
      and msg.key' = NoKey and msg.encryption' = PkB
      and Eve.knows' = Eve.knows )
    or
    ( phase = 0 and partner = Eve and phase' = 1
      and msg.sender' = Alice and msg.process' = Eve and msg.nonce' = Na
      and msg.key' = NoKey and msg.encryption' = PkE
      and Eve.knows' = Eve.knows )
    or
    -- honest partner: Bob answers with his nonce
    ( phase = 1 and partner = Bob and phase' = 3
      and msg.sender' = Bob and msg.process' = Alice and msg.nonce' = Nb
      and msg.key' = NoKey and msg.encryption' = PkA
      and Eve.knows' = Eve.knows )
    or
    -- partner Eve, option 1: relay the hello to Bob re-encrypted,
    -- claiming it comes from Alice
    ( phase = 1 and partner = Eve and phase' = 2
      and msg.sender' = Eve and msg.process' = Alice and msg.nonce' = Na
      and msg.key' = NoKey and msg.encryption' = PkB
      and Eve.knows' = Eve.knows )
    or
    -- partner Eve, option 2: answer the hello herself with a fresh nonce
    ( phase = 1 and partner = Eve and phase' = 3
      and msg.sender' = Eve and msg.process' = Alice and msg.nonce' = Ne
      and msg.key' = NoKey and msg.encryption' = PkA
      and Eve.knows' = Eve.knows )
    or
    -- Bob (tricked by the relay) answers towards Alice
    ( phase = 2 and phase' = 3
      and msg.sender' = Bob and msg.process' = Alice and msg.nonce' = Nb
      and msg.key' = NoKey and msg.encryption' = PkA
      and Eve.knows' = Eve.knows )
    or
    -- Alice confirms to her partner, echoing the nonce she received and
    -- carrying the established session secret
    ( phase = 3 and partner = Bob and phase' = 4
      and msg.sender' = Alice and msg.process' = Bob and msg.nonce' = msg.nonce
      and msg.key' = Kab and msg.encryption' = PkB
      and Eve.knows' = Eve.knows )
    or
    -- honest session, misuse: the confirmation goes out unencrypted
    ( phase = 3 and partner = Bob and phase' = 4
      and msg.sender' = Alice and msg.process' = Bob and msg.nonce' = msg.nonce
      and msg.key' = Kab and msg.encryption' = NoKey
      and Eve.knows' = Eve.knows union {Kab} )
    or
    ( phase = 3 and partner = Eve and phase' = 4
      and msg.sender' = Alice and msg.process' = Eve and msg.nonce' = msg.nonce
      and msg.key' = Kab and msg.encryption' = PkE
      and Eve.knows' = Eve.knows union {Kab} )
  )

invariant secrecy: Kab notin Eve.knows
)MODEL";

inline constexpr const char* generic_ccp = R"LIB(-- The generic predicate set: equality and position ordering.
predset generic = eq, lt
-- Enabling != as well reproduces the alternative single-class solution
-- on the counter model.
predset genericNe = eq, lt, ne
)LIB";

inline constexpr const char* security_ccp = R"LIB(-- Security predicates over the message vocabulary shared by the NSP
-- models. replay follows the shape from the literature: a message sent
-- earlier by an honest process reappears verbatim with Eve as the sender.
pred replay[t1: pos, t2: pos] {
  t1 < t2
  and msg.sender@t1 != Eve and msg.sender@t2 = Eve
  and msg.nonce@t2 = msg.nonce@t1
  and msg.process@t2 = msg.process@t1
  and msg.key@t2 = msg.key@t1
  and msg.encryption@t2 = msg.encryption@t1
}

-- manInTheMiddle: Eve forwards an honest payload re-encrypted under a
-- different key, while Alice and Bob exchange nothing directly in
-- between. One faithful reading of the informal description; see docs.
pred manInTheMiddle[t1: pos, t2: pos] {
  t1 < t2
  and msg.sender@t1 != Eve and msg.sender@t2 = Eve
  and msg.nonce@t2 = msg.nonce@t1
  and msg.encryption@t2 != msg.encryption@t1
  and forall t in (t1, t2) {
    not (msg.sender@t = Alice and msg.process@t = Bob)
    and not (msg.sender@t = Bob and msg.process@t = Alice)
  }
}
)LIB";

struct Entry {
    std::string name;
    const char* model_source;
    std::vector<const char*> libraries;
    std::string default_property;
};

inline const std::vector<Entry>& entries() {
    static const std::vector<Entry> all = {
        {"counter", counter_ccm, {generic_ccp}, "alwaysOne"},
        {"running-example", running_example_ccm, {generic_ccp}, "secrecy"},
        {"nsp-symmetric", nsp_symmetric_ccm, {generic_ccp, security_ccp}, "secrecy"},
        {"nsp-public-key", nsp_public_key_ccm, {generic_ccp, security_ccp}, "secrecy"},
    };
    return all;
}

struct Loaded {
    ModelFile model;
    std::string default_property;
};

inline Loaded load(const std::string& name) {
    for (const auto& e : entries()) {
        if (e.name != name) continue;
        Loaded out;
        out.model = parse_model(e.model_source);
        for (const char* lib : e.libraries) parse_library(lib, out.model);
        out.default_property = e.default_property;
        return out;
    }
    throw std::invalid_argument("unknown corpus model: " + name +
                                " (available: counter, running-example, nsp-symmetric, nsp-public-key)");
}

} // namespace corpus
} // namespace cexclass
