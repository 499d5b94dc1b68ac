#include <doctest.h>

#include <algorithm>

#include "archloom/model.hpp"
#include "support/fixture.hpp"

using namespace archloom;
using archloom::testing::vehreg;

namespace {

ArchElement element(std::string id, ElementKind kind, std::string name) {
    ArchElement out;
    out.id = std::move(id);
    out.kind = kind;
    out.name = std::move(name);
    return out;
}

std::vector<std::string> codes_of(const std::vector<Diagnostic>& diagnostics) {
    std::vector<std::string> out;
    for (const Diagnostic& d : diagnostics) out.push_back(d.code);
    return out;
}

}  // namespace

TEST_CASE("empty input builds an empty model") {
    BuildResult built = build_model({}, {});
    REQUIRE(built.ok());
    CHECK(built.model->elements().empty());
    CHECK(built.model->links().empty());
}

TEST_CASE("a small derivation chain builds") {
    std::vector<ArchElement> elements = {
        element("F01", ElementKind::BusinessFunction,
                "Prepare documents for registration of a vehicle"),
        element("OPTC01.03", ElementKind::BusinessOperation,
                "Initiate the vehicle registration process"),
        element("SRTS01.03", ElementKind::OperationalService,
                "Initiation of the vehicle registration process"),
    };
    std::vector<Link> links = {
        {"F01", "OPTC01.03", LinkKind::Contains, {}},
        {"SRTS01.03", "OPTC01.03", LinkKind::Implements, {}},
    };
    BuildResult built = build_model(elements, links);
    REQUIRE(built.ok());
    CHECK(built.model->elements().size() == 3);
    CHECK(built.model->links().size() == 2);
}

TEST_CASE("unresolved link endpoints are E002 with the link location") {
    SourceSpan where{"x.arch", 3, 14, 4};
    std::vector<ArchElement> elements = {
        element("GetProcessStatus", ElementKind::Module, "GetProcessStatus")};
    std::vector<Link> links = {
        {"GetProcessStatus", "VF99", LinkKind::Realizes, where}};
    BuildResult built = build_model(elements, links);
    REQUIRE_FALSE(built.ok());
    REQUIRE(built.diagnostics.size() == 1);
    CHECK(built.diagnostics[0].code == "E002");
    CHECK(built.diagnostics[0].message.find("VF99") != std::string::npos);
    REQUIRE(built.diagnostics[0].span.has_value());
    CHECK(built.diagnostics[0].span->file == "x.arch");
    CHECK(built.diagnostics[0].span->line == 3);
    CHECK(built.diagnostics[0].span->column == 14);
}

TEST_CASE("a reversed realization is E003 naming both kinds") {
    std::vector<ArchElement> elements = {
        element("VF05", ElementKind::ViewFunction, "Choose type"),
        element("GetProcessStatus", ElementKind::Module, "GetProcessStatus")};
    std::vector<Link> links = {
        {"VF05", "GetProcessStatus", LinkKind::Realizes, {}}};
    BuildResult built = build_model(elements, links);
    REQUIRE_FALSE(built.ok());
    REQUIRE(built.diagnostics.size() == 1);
    CHECK(built.diagnostics[0].code == "E003");
    CHECK(built.diagnostics[0].message.find(
              "ViewFunction may not Realize Module") != std::string::npos);
}

TEST_CASE("duplicate ids are E001, reported per extra declaration") {
    std::vector<ArchElement> elements = {
        element("X", ElementKind::BusinessProcess, "one"),
        element("X", ElementKind::Component, "two"),
        element("X", ElementKind::Class, "three")};
    BuildResult built = build_model(elements, {});
    REQUIRE_FALSE(built.ok());
    CHECK(codes_of(built.diagnostics) ==
          std::vector<std::string>{"E001", "E001"});
}

TEST_CASE("Contains must stay a forest") {
    SUBCASE("two parents") {
        std::vector<ArchElement> elements = {
            element("P1", ElementKind::BusinessProcess, "p1"),
            element("P2", ElementKind::BusinessProcess, "p2"),
            element("F", ElementKind::BusinessFunction, "f")};
        std::vector<Link> links = {{"P1", "F", LinkKind::Contains, {}},
                                   {"P2", "F", LinkKind::Contains, {}}};
        BuildResult built = build_model(elements, links);
        REQUIRE_FALSE(built.ok());
        CHECK(codes_of(built.diagnostics) == std::vector<std::string>{"E005"});
    }
    SUBCASE("cycle") {
        std::vector<ArchElement> elements = {
            element("A", ElementKind::BusinessFunction, "a"),
            element("B", ElementKind::BusinessFunction, "b")};
        std::vector<Link> links = {{"A", "B", LinkKind::Contains, {}},
                                   {"B", "A", LinkKind::Contains, {}}};
        BuildResult built = build_model(elements, links);
        REQUIRE_FALSE(built.ok());
        REQUIRE_FALSE(built.diagnostics.empty());
        CHECK(built.diagnostics[0].code == "E005");
        CHECK(built.diagnostics[0].message.find("cycle") != std::string::npos);
    }
    SUBCASE("an exact duplicate edge is deduplicated, not a second parent") {
        std::vector<ArchElement> elements = {
            element("P", ElementKind::BusinessProcess, "p"),
            element("F", ElementKind::BusinessFunction, "f")};
        std::vector<Link> links = {{"P", "F", LinkKind::Contains, {}},
                                   {"P", "F", LinkKind::Contains, {}}};
        BuildResult built = build_model(elements, links);
        REQUIRE(built.ok());
        CHECK(built.model->links().size() == 1);
    }
}

TEST_CASE("element-level invariants are E004") {
    SUBCASE("empty name") {
        BuildResult built =
            build_model({element("A", ElementKind::Class, "")}, {});
        REQUIRE_FALSE(built.ok());
        CHECK(built.diagnostics[0].code == "E004");
    }
    SUBCASE("bad id token") {
        BuildResult built =
            build_model({element("9lives", ElementKind::Class, "x")}, {});
        REQUIRE_FALSE(built.ok());
        CHECK(built.diagnostics[0].code == "E004");
    }
    SUBCASE("form attribute outside dialogs") {
        ArchElement bad = element("M", ElementKind::Module, "M");
        bad.attrs["form"] = "nope";
        BuildResult built = build_model({bad}, {});
        REQUIRE_FALSE(built.ok());
        CHECK(built.diagnostics[0].code == "E004");
        CHECK(built.diagnostics[0].message.find("form") != std::string::npos);
    }
}

TEST_CASE("neighbors of VF05 going down are its realizing modules") {
    auto down = vehreg().neighbors("VF05", Direction::Down);
    // Covers targets sit above VF05 and flows are absent, so only the three
    // modules remain; order is the id order.
    std::vector<std::pair<std::string, LinkKind>> got;
    for (const auto& [element, kind] : down) got.emplace_back(element->id, kind);
    CHECK(got == std::vector<std::pair<std::string, LinkKind>>{
                     {"GetProcessStatus", LinkKind::Realizes},
                     {"SaveProcessStatus", LinkKind::Realizes},
                     {"SelectProcessType", LinkKind::Realizes}});
}

TEST_CASE("neighbors of GetProcessStatus going down are the nine methods") {
    auto down =
        vehreg().neighbors("GetProcessStatus", Direction::Down, LinkKind::Realizes);
    std::vector<std::string> ids;
    for (const auto& [element, kind] : down) ids.push_back(element->id);
    CHECK(ids == std::vector<std::string>{
                     "CheckAppointment", "CheckBooking", "DefineProcessStatus",
                     "DutyPaid", "IsInsurance", "IsPasport", "IsProperty",
                     "IsVehicle", "ProcessStatus"});
}

TEST_CASE("unknown ids raise E101") {
    BuildResult built = build_model({}, {});
    CHECK_THROWS_AS((void)built.model->neighbors("X", Direction::Down),
                    ArchError);
    try {
        (void)built.model->at("X");
        FAIL("expected ArchError");
    } catch (const ArchError& error) {
        CHECK(error.diagnostic().code == "E101");
    }
}

TEST_CASE("children come back in declaration order") {
    auto children = vehreg().children("D01.03.03");
    REQUIRE(children.size() == 7);
    CHECK(children.front()->id == "VF05");
    CHECK(children.back()->id == "VF11");
    for (size_t i = 1; i < children.size(); ++i) {
        CHECK(children[i - 1]->seq < children[i]->seq);
    }
}

TEST_CASE("enclosing walks the Contains chain") {
    const ArchElement* component =
        vehreg().enclosing("GetProcessStatus", ElementKind::Component);
    REQUIRE(component != nullptr);
    CHECK(component->id == "DS");
    const ArchElement* service =
        vehreg().enclosing("VF05", ElementKind::OperationalService);
    REQUIRE(service != nullptr);
    CHECK(service->id == "SRTS01.03");
    CHECK(vehreg().enclosing("P01", ElementKind::Component) == nullptr);
}
