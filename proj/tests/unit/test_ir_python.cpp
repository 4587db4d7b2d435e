#include <catch2/catch_amalgamated.hpp>

#include "clause_audit/adapters/python_adapter.hpp"
#include "clause_audit/syntax_tree.hpp"

using namespace clause_audit;
using adapters::parse_python;
using adapters::python_pack;

namespace {

const DefRecord* find_def(const std::vector<DefRecord>& defs, const std::string& name) {
    for (const auto& d : defs)
        if (d.name == name) return &d;
    return nullptr;
}

std::vector<const CallRecord*> find_calls(const std::vector<CallRecord>& calls,
                                          const std::string& name) {
    std::vector<const CallRecord*> out;
    for (const auto& c : calls)
        if (c.name == name) out.push_back(&c);
    return out;
}

} // namespace

TEST_CASE("python: defs, methods, params, spans") {
    const std::string src =
        "class Server:\n"
        "    async def send_tool_list_changed(self):\n"
        "        \"\"\"Send a tool list changed notification.\"\"\"\n"
        "        await self.send_notification(\n"
        "            types.ServerNotification(types.ToolListChangedNotification())\n"
        "        )\n"
        "\n"
        "def helper(a, b=1, *args, **kwargs):\n"
        "    return a\n";
    auto tree = parse_python(src, "f.py");
    auto defs = extract_defs(*tree, python_pack(), "f.py");

    const DefRecord* method = find_def(defs, "send_tool_list_changed");
    REQUIRE(method != nullptr);
    CHECK(method->kind == DefKind::Method);
    CHECK(method->params == std::vector<std::string>{"self"});
    CHECK(method->span.start == 2);
    CHECK(method->span.end == 6);

    const DefRecord* fn = find_def(defs, "helper");
    REQUIRE(fn != nullptr);
    CHECK(fn->kind == DefKind::Function);
    CHECK(fn->params == std::vector<std::string>{"a", "b", "args", "kwargs"});
}

TEST_CASE("python: guard chains walk if/loop/case ancestors") {
    const std::string src =
        "def run(self):\n"
        "    if self.ready:\n"
        "        for item in items:\n"
        "            emit(item)\n"
        "    match request:\n"
        "        case types.PingRequest():\n"
        "            respond()\n"
        "    top()\n";
    auto tree = parse_python(src, "f.py");
    auto calls = extract_calls(*tree, python_pack(), "f.py");

    auto emit = find_calls(calls, "emit");
    REQUIRE(emit.size() == 1);
    CHECK(emit[0]->cond ==
          std::vector<std::string>{"self.ready", "for item in items"});

    auto respond = find_calls(calls, "respond");
    REQUIRE(respond.size() == 1);
    CHECK(respond[0]->cond == std::vector<std::string>{"case types.PingRequest()"});

    auto top = find_calls(calls, "top");
    REQUIRE(top.size() == 1);
    CHECK(top[0]->cond.empty());
}

TEST_CASE("python: condition-position calls are not guarded by their own if") {
    const std::string src =
        "def flow(self, request):\n"
        "    if self.context.is_token_valid():\n"
        "        self._add_auth_header(request)\n";
    auto tree = parse_python(src, "f.py");
    auto calls = extract_calls(*tree, python_pack(), "f.py");

    auto check = find_calls(calls, "is_token_valid");
    REQUIRE(check.size() == 1);
    CHECK(check[0]->cond.empty());
    CHECK(check[0]->recv == "self.context");
    CHECK(check[0]->kind == CallKind::MethodCall);

    auto add = find_calls(calls, "_add_auth_header");
    REQUIRE(add.size() == 1);
    CHECK(add[0]->cond == std::vector<std::string>{"self.context.is_token_valid()"});
}

TEST_CASE("python: strings and comments never produce records") {
    const std::string src =
        "def doc(self):\n"
        "    \"\"\"calls hidden_call() in prose.\"\"\"\n"
        "    # also commented_call()\n"
        "    s = \"inline_call()\"\n"
        "    return s\n";
    auto tree = parse_python(src, "f.py");
    auto calls = extract_calls(*tree, python_pack(), "f.py");
    CHECK(find_calls(calls, "hidden_call").empty());
    CHECK(find_calls(calls, "commented_call").empty());
    CHECK(find_calls(calls, "inline_call").empty());
}

TEST_CASE("python: constructor-style calls keep the uppercase convention") {
    const std::string src = "def f():\n    x = ToolList()\n    y = types.PingRequest()\n";
    auto tree = parse_python(src, "f.py");
    auto calls = extract_calls(*tree, python_pack(), "f.py");
    auto ctor = find_calls(calls, "ToolList");
    REQUIRE(ctor.size() == 1);
    CHECK(ctor[0]->kind == CallKind::ConstructorCall);
    auto ping = find_calls(calls, "PingRequest");
    REQUIRE(ping.size() == 1);
    CHECK(ping[0]->kind == CallKind::ConstructorCall);
    CHECK(ping[0]->recv == "types");
}

TEST_CASE("python: empty file and parse failures") {
    auto tree = parse_python("", "f.py");
    CHECK(extract_defs(*tree, python_pack(), "f.py").empty());
    CHECK(extract_calls(*tree, python_pack(), "f.py").empty());

    CHECK_THROWS_AS(parse_python("def f():\n\tx = 1\n", "f.py"), ParseFailureError);
    CHECK_THROWS_AS(parse_python("s = \"unterminated\n", "f.py"), ParseFailureError);
    try {
        parse_python("x = 'open\n", "bad.py");
        FAIL("expected ParseFailureError");
    } catch (const ParseFailureError& e) {
        CHECK(e.filepath() == "bad.py");
        CHECK(e.line() == 1);
    }
}

TEST_CASE("python: single-line suites attach calls to the guard") {
    const std::string src = "def f(x):\n    if x: fire(x)\n    always(x)\n";
    auto tree = parse_python(src, "f.py");
    auto calls = extract_calls(*tree, python_pack(), "f.py");
    auto fire = find_calls(calls, "fire");
    REQUIRE(fire.size() == 1);
    CHECK(fire[0]->cond == std::vector<std::string>{"x"});
    auto always = find_calls(calls, "always");
    REQUIRE(always.size() == 1);
    CHECK(always[0]->cond.empty());
}
