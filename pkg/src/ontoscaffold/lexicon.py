"""Closed-class word lists and small lemma tables for the builtin tagger.

These lists are versioned data, not tunables: golden-file tests freeze the
tagger's behaviour on fixture sentences, so additions here require
regenerating those goldens. Lists are intentionally compact; the remote
tagger sidecar is the high-fidelity option.
"""

from __future__ import annotations

DETERMINERS = frozenset(
    """
    a an the this that these those each every any some all both either
    neither no such another
    """.split()
)

PRONOUNS = frozenset(
    """
    i you he she it we they me him her us them my your his its our their
    mine yours hers ours theirs myself yourself himself herself itself
    ourselves yourselves themselves who whom whose which what something
    anything nothing everything someone anyone everyone nobody one oneself
    """.split()
)

# Modals and the be/have/do families; "shall" matters most for standards text.
AUXILIARIES = frozenset(
    """
    am is are was were be been being have has had having do does did done
    shall should will would can could may might must ought need dare
    """.split()
)

PREPOSITIONS = frozenset(
    """
    of in on at by for with to from into onto over under about against
    between among through during before after above below up down out off
    across behind beyond within without upon near via per according
    regarding concerning than as
    """.split()
)

CONJUNCTIONS = frozenset(
    """
    and or but nor so yet if because although though while whereas unless
    until when where that whether since
    """.split()
)

NEGATIONS = frozenset(["not", "n't", "never", "only"])

# Stopwords for candidate cleaning: closed classes plus glue words that never
# make useful graph nodes on their own.
STOPWORDS = (
    DETERMINERS
    | PRONOUNS
    | AUXILIARIES
    | PREPOSITIONS
    | CONJUNCTIONS
    | NEGATIONS
    | frozenset(
        """
        also too very quite rather just even still there here then thus
        hence therefore however moreover furthermore together etc other
        others same own well e.g i.e
        """.split()
    )
)

# Adjectives common in standards/ethics prose. Suffix rules catch the rest.
ADJECTIVE_LEXICON = frozenset(
    """
    public private professional ethical legal moral good bad safe unsafe
    best better worse worst high low full fair honest independent
    consistent adequate appropriate relevant necessary possible realistic
    sound lifelong human social cultural technical current new old long
    short significant important proper due empty
    """.split()
)

# no bare "ent"/"ant": they miscatch management, client, development
ADJECTIVE_SUFFIXES = (
    "ous", "ful", "ive", "ible", "able", "ical", "ial", "less",
    "ary", "ory",
)

# Verbs common in obligations prose; suffix/position heuristics catch the rest.
VERB_LEXICON = frozenset(
    """
    act accept approve ensure maintain advance participate promote strive
    support document disclose report review test identify define use
    provide make take give keep seek avoid apply follow meet serve work
    commit adhere subscribe respect improve extend moderate temper endorse
    treat assist help consider require perform develop design specify
    analyze build produce deliver manage obey violate uphold further
    form summarize detect correct associate
    """.split()
)

VERB_SUFFIXES = ("ize", "ise", "ify", "ate")

# Lemma table for irregular verb forms; regular forms go through suffix
# stripping in tagging.lemmatize_verb.
IRREGULAR_VERB_LEMMAS = {
    "am": "be", "is": "be", "are": "be", "was": "be", "were": "be",
    "been": "be", "being": "be",
    "has": "have", "had": "have", "having": "have",
    "does": "do", "did": "do", "done": "do",
    "went": "go", "gone": "go", "goes": "go",
    "made": "make", "making": "make",
    "took": "take", "taken": "take", "taking": "take",
    "gave": "give", "given": "give", "giving": "give",
    "kept": "keep", "met": "meet", "sought": "seek", "held": "hold",
    "found": "find", "left": "leave", "built": "build", "dealt": "deal",
    "brought": "bring", "wrote": "write", "written": "write",
    "said": "say", "saw": "see", "seen": "see", "knew": "know",
    "known": "know", "came": "come", "using": "use",
}

# Irregular or invariant plurals for the final-token singularizer.
IRREGULAR_SINGULARS = {
    "men": "man", "women": "woman", "people": "person",
    "children": "child", "criteria": "criterion", "analyses": "analysis",
    "bases": "basis", "hypotheses": "hypothesis", "indices": "index",
    "matrices": "matrix", "appendices": "appendix", "media": "medium",
    "phenomena": "phenomenon", "buses": "bus", "viruses": "virus",
    "statuses": "status", "processes": "process", "accesses": "access",
    # invariants: leave these alone
    "data": "data", "news": "news", "ethics": "ethics", "series": "series",
    "species": "species", "software": "software", "physics": "physics",
    "mathematics": "mathematics", "politics": "politics",
    "economics": "economics", "means": "means", "premises": "premises",
}

# Abbreviations that end with '.' but do not terminate a sentence.
ABBREVIATIONS = frozenset(
    """
    e.g i.e etc vs cf al no fig eq sec ch pp mr mrs ms dr prof st inc ltd
    co corp dept est
    """.split()
)
