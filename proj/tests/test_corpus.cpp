#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "meso/corpus.hpp"
#include "meso/util.hpp"

using namespace meso::corpus;

TEST_CASE("strip_boilerplate extracts the body between markers") {
    const std::string text =
        "junk header\n*** START OF THE EBOOK X ***\nbody line one\n\nbody line two\n"
        "*** END OF THE EBOOK X ***\ntrailer\n";
    bool found = false;
    CHECK(strip_boilerplate(text, &found) == "body line one\n\nbody line two\n");
    CHECK(found);
}

TEST_CASE("strip_boilerplate without markers returns input and flags it") {
    bool found = true;
    const std::string text = "no markers here\n\nat all\n";
    CHECK(strip_boilerplate(text, &found) == text);
    CHECK_FALSE(found);
}

TEST_CASE("strip_boilerplate rejects empty and non-UTF-8 input") {
    CHECK_THROWS_WITH_AS(strip_boilerplate(""), "empty document", std::runtime_error);
    CHECK_THROWS_AS(strip_boilerplate("\xff\xfe broken"), std::runtime_error);
}

TEST_CASE("segment_paragraphs splits on blank-line runs") {
    CHECK(segment_paragraphs("A.\n\nB.\n\n\nC.") == std::vector<std::string>{"A.", "B.", "C."});
}

TEST_CASE("segment_paragraphs single paragraph") {
    CHECK(segment_paragraphs("just one line") == std::vector<std::string>{"just one line"});
}

TEST_CASE("segment_paragraphs on whitespace-only text fails") {
    CHECK_THROWS_AS(segment_paragraphs("\n\n\n"), std::runtime_error);
}

TEST_CASE("segment count equals blank-run count plus one") {
    const auto paras = segment_paragraphs("p1\n\np2\n\n\n\np3\n\np4");
    CHECK(paras.size() == 4);
}

TEST_CASE("preprocess applies stopwords and lemmas in order") {
    StopwordSet stop{"the"};
    LemmaMap lem{{"dogs", "dog"}, {"ran", "run"}};
    CHECK(preprocess("The dogs ran", stop, lem) == std::vector<std::string>{"dog", "run"});
}

TEST_CASE("preprocess may return empty for all-stopword input") {
    StopwordSet stop{"the", "a", "of"};
    CHECK(preprocess("The of a THE", stop, {}).empty());
}

TEST_CASE("preprocess tokenizes on non-alphabetic boundaries") {
    // hand-traced: "Cats, cats; CATS!" -> cats cats cats -> lemma cat x3
    LemmaMap lem{{"cats", "cat"}};
    CHECK(preprocess("Cats, cats; CATS!", {}, lem) ==
          std::vector<std::string>{"cat", "cat", "cat"});
    // digits and punctuation separate tokens; hyphenated words split
    CHECK(preprocess("mother-in-law 42nd", {}, {}) ==
          std::vector<std::string>{"mother", "in", "law", "nd"});
}

TEST_CASE("token count never increases through preprocessing") {
    StopwordSet stop{"and", "or"};
    LemmaMap lem{{"cats", "cat"}};
    const std::string texts[] = {"cats and dogs", "a b c d", "and or and", ""};
    for (const auto& t : texts) {
        size_t raw_tokens = 0;
        bool in_word = false;
        for (char c : t) {
            const bool alpha = std::isalpha(static_cast<unsigned char>(c));
            if (alpha && !in_word) ++raw_tokens;
            in_word = alpha;
        }
        CHECK(preprocess(t, stop, lem).size() <= raw_tokens);
    }
}

TEST_CASE("manifest round trip and duplicate detection") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "meso_corpus_test";
    fs::create_directories(dir);
    meso::write_file(dir / "m.csv",
                     "id,author,title,path\nb1,Poe,Works I,books/b1.txt\n"
                     "b2,Poe,Works II,books/b2.txt\n");
    const auto m = load_manifest(dir / "m.csv");
    REQUIRE(m.entries.size() == 2);
    CHECK(m.entries[0].id == "b1");
    CHECK(m.entries[1].title == "Works II");

    meso::write_file(dir / "dup.csv", "id,author,title,path\nb1,A,T,p\nb1,B,U,q\n");
    CHECK_THROWS_AS(load_manifest(dir / "dup.csv"), std::runtime_error);
}

TEST_CASE("load_document drops empty paragraphs and preserves order") {
    StopwordSet stop{"the"};
    ManifestEntry e{"id1", "A", "T", ""};
    const std::string raw = "First dog here.\n\nThe the the.\n\nSecond cat.";
    const auto doc = load_document(e, raw, stop, {});
    REQUIRE(doc.paragraphs.size() == 2);
    CHECK(doc.paragraphs[0] == std::vector<std::string>{"first", "dog", "here"});
    CHECK(doc.paragraphs[1] == std::vector<std::string>{"second", "cat"});
    CHECK_FALSE(doc.boilerplate_markers_found);
}
