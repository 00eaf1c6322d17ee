//! The built-in sentence suite: each case is a bracketed sentence, its goal
//! type and whether it should be derivable.

/// One suite sentence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteCase {
    pub id: &'static str,
    pub bracketing: &'static str,
    pub goal: &'static str,
    pub derivable: bool,
}

const fn case(id: &'static str, bracketing: &'static str, goal: &'static str, derivable: bool) -> SuiteCase {
    SuiteCase {
        id,
        bracketing,
        goal,
        derivable,
    }
}

pub const SUITE: &[SuiteCase] = &[
    case("relative", "papers (that (Bob rejected))", "n", true),
    case("relative-adverb", "papers (that (Bob (rejected immediately)))", "n", true),
    case(
        "relative-overt-object",
        "papers (that (Bob (rejected (the proposal))))",
        "n",
        false,
    ),
    case(
        "adjunct",
        "Bob ((left (the room)) <i>(without^bc (closing (the window))))",
        "s",
        true,
    ),
    case(
        "adjunct-island",
        "window (that (Bob ((left (the room)) <i>(without^bc closing))))",
        "n",
        false,
    ),
    case("parasitic-adjunct", "papers (that (Bob (rejected <i>(without^d reading))))", "n", true),
    case(
        "parasitic-adjunct-adverb",
        "papers (that (Bob (rejected <i>(without^d (reading carefully^gp)))))",
        "n",
        true,
    ),
    case(
        "parasitic-uncalibrated",
        "papers (that (reviewers (rejected <i>(without^u (reading carefully^gp)))))",
        "n",
        true,
    ),
    case(
        "parasitic-subject",
        "security_breach (that^e ((a ((report about) (in (the NYT)))) (made public)))",
        "n",
        true,
    ),
    case(
        "parasitic-control",
        "candidate (whom^f ((Alice (persuaded (every (friend of)))) (to_vote for)))",
        "n",
        true,
    ),
    case("question", "(which papers) ((did Bob) reject)", "wh", true),
    case("question-adverb", "(which papers) ((did Bob) (reject immediately))", "wh", true),
    case("embedded-question", "I (know ((which papers) (Bob (will reject))))", "s", true),
    case(
        "embedded-question-adverb",
        "I (know ((which papers) (Bob (will (reject immediately)))))",
        "s",
        true,
    ),
    case("tough", "(this paper) (is (hard (to understand)))", "s", true),
    case(
        "tough-overt-object",
        "(this paper) (is (hard (to (understand (the proposal)))))",
        "s",
        false,
    ),
    case(
        "question-despite",
        "(which papers) ((did Bob) (accept <i>(despite^d (not liking))))",
        "wh",
        true,
    ),
    case(
        "question-despite-adverb",
        "(which papers) ((did Bob) (accept <i>(despite^d (not (liking really)))))",
        "wh",
        true,
    ),
    case(
        "embedded-before",
        "I (know ((which papers) (Bob (will (reject <i>(before^d (even reading)))))))",
        "s",
        true,
    ),
    case(
        "embedded-before-adverb",
        "I (know ((which papers) (Bob (will (reject <i>(before^d (even (reading cursorily))))))))",
        "s",
        true,
    ),
    case(
        "tough-after",
        "(this paper) (is (easy (to ((explain well) <i>(after^d studying)))))",
        "s",
        true,
    ),
    case(
        "tough-after-adverb",
        "(this paper) (is (easy (to ((explain well) <i>(after^d (studying thoroughly))))))",
        "s",
        true,
    ),
];

pub fn find(id: &str) -> Option<&'static SuiteCase> {
    SUITE.iter().find(|c| c.id == id)
}
