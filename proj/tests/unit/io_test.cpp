#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "pmlab/io.hpp"

namespace pmlab {
namespace {

using testing::max_abs;

MatrixRecord parse(const std::string& text) {
  std::istringstream is(text);
  return read_matrix(is);
}

std::string render(const MatrixRecord& r, MatrixFormat format) {
  std::ostringstream os;
  write_matrix(os, r, format);
  return os.str();
}

TEST(Dense, RoundTripIsExact) {
  const auto rec = to_record(w_beta(0.6));
  const auto back = parse(render(rec, MatrixFormat::Dense));
  EXPECT_EQ(max_abs(back.matrix - rec.matrix), 0.0);
  EXPECT_EQ(back.provenance, "w_beta@0.6");
  EXPECT_EQ(back.layout, rec.layout);
}

TEST(Dense, ComplexEntriesSurvive) {
  std::mt19937_64 rng(59);
  MatrixRecord rec;
  rec.matrix = testing::random_matrix(rng, 16);
  EXPECT_EQ(max_abs(parse(render(rec, MatrixFormat::Dense)).matrix - rec.matrix), 0.0);
}

TEST(Dense, Malformed) {
  EXPECT_THROW(parse("{"), FormatError);
  EXPECT_THROW(parse(R"({"format":"other"})"), FormatError);
  EXPECT_THROW(parse(R"({"format":"pmlab-dense","dimension":2,"layout":[["q",2]],"entries":[[1,0]]})"), FormatError);
  EXPECT_THROW(parse(R"({"format":"pmlab-dense","dimension":4,"layout":[["q",2]],"entries":[]})"), FormatError);
  EXPECT_THROW(
      parse(R"({"format":"pmlab-dense","dimension":2,"layout":[["q",2]],"entries":[[1,0],[0,0],[0,0],["1",0]]})"),
      FormatError);
}

TEST(Dense, Document) {
  const auto doc = nlohmann::json::parse(render(to_record(w_ocb()), MatrixFormat::Dense));
  EXPECT_EQ(doc["format"], "pmlab-dense");
  EXPECT_EQ(doc["dimension"], 16);
  EXPECT_EQ(doc["entries"].size(), 256u);
  EXPECT_EQ(doc["layout"][1][0], "A_O");
}

TEST(Pauli, RoundTrip) {
  const auto rec = to_record(w_beta(0.75));
  const std::string text = render(rec, MatrixFormat::Pauli);
  EXPECT_EQ(text.rfind("# pmlab pauli A_I A_O B_I B_O\n", 0), 0u);
  const auto back = parse(text);
  EXPECT_LE(max_abs(back.matrix - rec.matrix), 1e-16);
  EXPECT_EQ(back.provenance, "w_beta@0.75");
}

TEST(Pauli, HandWritten) {
  const auto rec = parse("# a process\nIIII 0.25\n\nIZZI 0.25\r\n");
  EXPECT_TRUE(validate(rec.matrix).is_valid);
  EXPECT_EQ(rec.provenance, "custom");
}

TEST(Pauli, Malformed) {
  EXPECT_THROW(parse("# only a comment\n"), FormatError);
  EXPECT_THROW(parse("IIII\n"), FormatError);
  EXPECT_THROW(parse("IIII 0.25 7\n"), FormatError);
  EXPECT_THROW(parse("IIII 0.25x\n"), FormatError);
  EXPECT_THROW(parse("IIQI 0.25\n"), FormatError);
  EXPECT_THROW(parse("IIII 0.25\nIIII 0.25\n"), FormatError);
  EXPECT_THROW(parse("III 0.25\n"), FormatError);
}

TEST(Files, EmptyAndMissing) {
  EXPECT_THROW(parse(""), FormatError);
  EXPECT_THROW(parse("  \n\t\n"), FormatError);
  EXPECT_THROW(read_matrix_file(PMLAB_TEST_TMP "/does-not-exist.json"), FormatError);
  const std::string path = PMLAB_TEST_TMP "/io_empty.txt";
  std::ofstream(path).close();
  EXPECT_THROW(read_matrix_file(path), FormatError);
}

TEST(Json, ValidityReport) {
  const auto doc = nlohmann::json::parse(to_json(validate(ComplexMatrix::Identity(16, 16) / 4.0 +
                                                          0.1 * pauli_matrix(PauliString::from_label("IZII")))));
  EXPECT_FALSE(doc["valid"].get<bool>());
  EXPECT_EQ(doc["forbidden_terms"][0]["term"], "IZII");
}

}  // namespace
}  // namespace pmlab
