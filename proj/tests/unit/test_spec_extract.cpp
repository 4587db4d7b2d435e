#include <catch2/catch_amalgamated.hpp>

#include "clause_audit/quantify.hpp"
#include "clause_audit/spec_extract.hpp"

using namespace clause_audit;

static const char* kDoc = R"(# Transports

General transport notes with no keywords.

When using the HTTP transport, servers MUST implement OAuth 2.0.
Servers SHOULD validate message sizes. Clients MAY retry failed requests.

## Tools

When the list of available tools changes, servers that declared the listChanged
capability SHOULD send a notification.

```
code_block MUST be ignored()
```

Servers MUST respond with a JSON-RPC error when a request fails.
)";

TEST_CASE("extraction finds every keyword sentence and classifies scope") {
    auto catalog = parse_spec_document(kDoc, SpecFormat::Markdown, "test");
    REQUIRE(catalog.clauses.size() == 5);

    const Clause& oauth = catalog.clauses[0];
    CHECK(oauth.rfc_keyword == RfcKeyword::MUST);
    CHECK(oauth.scope_condition == "When using the HTTP transport");
    CHECK(oauth.requirement_class == RequirementClass::OPTIONAL_CONDITIONAL_MUST);
    CHECK(oauth.actor == Actor::SERVER);
    CHECK(oauth.section_ref == "transports");
    CHECK(oauth.id == "transports-c1");

    const Clause& validate = catalog.clauses[1];
    CHECK(validate.rfc_keyword == RfcKeyword::SHOULD);
    CHECK(validate.scope_condition.empty());
    CHECK(validate.requirement_class == RequirementClass::OPTIONAL_NON_MUST);

    const Clause& retry = catalog.clauses[2];
    CHECK(retry.rfc_keyword == RfcKeyword::MAY);
    CHECK(retry.actor == Actor::CLIENT);

    const Clause& toollist = catalog.clauses[3];
    CHECK(toollist.rfc_keyword == RfcKeyword::SHOULD);
    CHECK(toollist.requirement_class == RequirementClass::OPTIONAL_NON_MUST);
    CHECK(toollist.actor == Actor::SERVER);
    CHECK(toollist.message_kind == "ToolListChangedNotification");
    CHECK(toollist.section_ref == "tools");
    CHECK(toollist.scope_condition == "When the list of available tools changes");

    const Clause& error = catalog.clauses[4];
    CHECK(error.rfc_keyword == RfcKeyword::MUST);
    CHECK(error.requirement_class == RequirementClass::MANDATORY);
    CHECK(error.id == "tools-c2");
}

TEST_CASE("extraction edge cases") {
    CHECK_THROWS_AS(parse_spec_document("", SpecFormat::Markdown), EmptyDocumentError);
    CHECK_THROWS_AS(spec_format_from_string("docx"), UnsupportedFormatError);

    auto none = parse_spec_document("No keywords at all here.", SpecFormat::Plain);
    CHECK(none.clauses.empty());

    // lowercase keywords are not normative
    auto lower = parse_spec_document("Servers must not do this.", SpecFormat::Plain);
    CHECK(lower.clauses.empty());

    // MUST NOT is one keyword, not a MUST plus a NOT
    auto mn = parse_spec_document("Servers MUST NOT leak tokens.", SpecFormat::Plain);
    REQUIRE(mn.clauses.size() == 1);
    CHECK(mn.clauses[0].rfc_keyword == RfcKeyword::MUST_NOT);

    // two keywords in one sentence yield two clauses sharing the text
    auto two = parse_spec_document("Servers MUST reply and clients MAY retry.",
                                   SpecFormat::Plain);
    REQUIRE(two.clauses.size() == 2);
    CHECK(two.clauses[0].rfc_keyword == RfcKeyword::MUST);
    CHECK(two.clauses[1].rfc_keyword == RfcKeyword::MAY);
    CHECK(two.clauses[0].text == two.clauses[1].text);
    CHECK(two.clauses[0].id != two.clauses[1].id);
}

TEST_CASE("keyword soundness and determinism") {
    auto one = parse_spec_document(kDoc, SpecFormat::Markdown);
    auto two = parse_spec_document(kDoc, SpecFormat::Markdown);
    REQUIRE(one.clauses.size() == two.clauses.size());
    for (size_t i = 0; i < one.clauses.size(); ++i) {
        CHECK(one.clauses[i] == two.clauses[i]);
        CHECK(one.clauses[i].text.find(keyword_phrase(one.clauses[i].rfc_keyword)) !=
              std::string::npos);
    }
}

TEST_CASE("concatenating documents unions their clause texts") {
    const std::string doc_a = "Servers MUST reply quickly.\n\nClients MAY retry.\n";
    const std::string doc_b = "Servers SHOULD validate sizes.\n";
    auto a = parse_spec_document(doc_a, SpecFormat::Plain);
    auto b = parse_spec_document(doc_b, SpecFormat::Plain);
    auto ab = parse_spec_document(doc_a + "\n" + doc_b, SpecFormat::Plain);

    std::multiset<std::string> expected, actual;
    for (const auto& c : a.clauses) expected.insert(c.text + "|" + to_string(c.rfc_keyword));
    for (const auto& c : b.clauses) expected.insert(c.text + "|" + to_string(c.rfc_keyword));
    for (const auto& c : ab.clauses) actual.insert(c.text + "|" + to_string(c.rfc_keyword));
    CHECK(expected == actual);
}

TEST_CASE("message lexicon picks the first full cue match") {
    CHECK(match_message("When the list of available tools changes, servers SHOULD send a "
                        "notification.")->name == "ToolListChangedNotification");
    CHECK(match_message("The frequency of pings SHOULD be configurable.")->name ==
          "PingRequest");
    CHECK(match_message("When the list of roots changes, clients SHOULD send a roots list "
                        "changed notification.")->name == "RootsListChangedNotification");
    CHECK(match_message("Implementations MAY log protocol events.") == nullptr);
}
