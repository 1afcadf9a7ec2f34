#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "lohi/lohi.hpp"
#include "support.hpp"

using namespace lohi;

namespace {

Fingerprint bits(std::initializer_list<std::size_t> on, std::size_t width = 1024) {
  Fingerprint fp(width);
  for (std::size_t b : on) fp.set(b);
  return fp;
}

double set_tanimoto(const Fingerprint& a, const Fingerprint& b) {
  const auto va = a.on_bits();
  const auto vb = b.on_bits();
  std::set<std::size_t> sa(va.begin(), va.end()), sb(vb.begin(), vb.end()), un = sa;
  un.insert(sb.begin(), sb.end());
  std::size_t inter = 0;
  for (std::size_t x : sa) inter += sb.count(x);
  return un.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(un.size());
}

}  // namespace

TEST(Fingerprint, SetTestAndPopcount) {
  Fingerprint fp(100);
  EXPECT_TRUE(fp.empty());
  fp.set(0);
  fp.set(63);
  fp.set(64);
  fp.set(99);
  fp.set(99);
  EXPECT_EQ(fp.popcount(), 4u);
  EXPECT_TRUE(fp.test(63));
  EXPECT_FALSE(fp.test(62));
  fp.reset(63);
  EXPECT_EQ(fp.popcount(), 3u);
  EXPECT_EQ(fp.on_bits(), (std::vector<std::size_t>{0, 64, 99}));
  EXPECT_THROW(fp.set(100), std::out_of_range);
  EXPECT_THROW((void)fp.test(1000), std::out_of_range);
}

TEST(Fingerprint, HexRoundTrip) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const Fingerprint fp = synth::random_fingerprint(rng, 1024, 0.1);
    const std::string hex = fp.to_hex();
    EXPECT_EQ(hex.size(), 256u);
    EXPECT_EQ(Fingerprint::from_hex(hex), fp);
  }
  // Bit 0 is the high bit of the first digit.
  EXPECT_EQ(bits({0}, 8).to_hex(), "80");
  EXPECT_EQ(bits({7}, 8).to_hex(), "01");
  EXPECT_THROW(Fingerprint::from_hex("zz"), InputError);
}

TEST(Tanimoto, Examples) {
  EXPECT_DOUBLE_EQ(tanimoto(bits({1, 2, 3}), bits({2, 3, 4})), 0.5);
  EXPECT_EQ(tanimoto(bits({5, 9}), bits({5, 9})), 1.0);
  EXPECT_EQ(tanimoto(bits({1, 2}), bits({3, 4})), 0.0);
  EXPECT_EQ(tanimoto(Fingerprint(64), Fingerprint(64)), 0.0);
  EXPECT_THROW(tanimoto(Fingerprint(512), Fingerprint(1024)), InputError);
}

TEST(Tanimoto, MatchesSetOracle) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> density(0.0, 0.5);
  for (int i = 0; i < 2000; ++i) {
    const auto a = synth::random_fingerprint(rng, 1024, density(rng));
    const auto b = synth::random_fingerprint(rng, 1024, density(rng));
    EXPECT_EQ(tanimoto(a, b), set_tanimoto(a, b));
  }
}

TEST(Smiles, SingleAtom) {
  const auto mol = parse_smiles("C");
  EXPECT_EQ(mol.atom_count(), 1u);
  EXPECT_EQ(mol.bond_count(), 0u);
  EXPECT_EQ(mol.atom(0).element, "C");
  EXPECT_EQ(mol.hydrogen_count(0), 4);
}

TEST(Smiles, RingClosureTriangle) {
  const auto mol = parse_smiles("C1CC1");
  ASSERT_EQ(mol.atom_count(), 3u);
  ASSERT_EQ(mol.bond_count(), 3u);
  for (const Bond& b : mol.bonds()) EXPECT_EQ(b.order, BondOrder::kSingle);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(mol.degree(i), 2u);
}

TEST(Smiles, BranchAndDoubleBond) {
  const auto mol = parse_smiles("CC(=O)O");
  ASSERT_EQ(mol.atom_count(), 4u);
  ASSERT_EQ(mol.bond_count(), 3u);
  std::multiset<std::tuple<std::string, std::string, BondOrder>> got;
  for (const Bond& b : mol.bonds()) {
    got.insert({mol.atom(b.begin).element, mol.atom(b.end).element, b.order});
  }
  const std::multiset<std::tuple<std::string, std::string, BondOrder>> want = {
      {"C", "C", BondOrder::kSingle}, {"C", "O", BondOrder::kDouble}, {"C", "O", BondOrder::kSingle}};
  EXPECT_EQ(got, want);
  EXPECT_EQ(mol.hydrogen_count(0), 3);
  EXPECT_EQ(mol.hydrogen_count(1), 0);
  EXPECT_EQ(mol.hydrogen_count(3), 1);
}

TEST(Smiles, AromaticBracketAndCharges) {
  const auto benzene = parse_smiles("c1ccccc1");
  EXPECT_EQ(benzene.bond_count(), 6u);
  for (const Bond& b : benzene.bonds()) EXPECT_EQ(b.order, BondOrder::kAromatic);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(benzene.hydrogen_count(i), 1);

  const auto ammonium = parse_smiles("[NH4+]");
  EXPECT_EQ(ammonium.atom(0).charge, 1);
  EXPECT_EQ(ammonium.hydrogen_count(0), 4);
  EXPECT_EQ(parse_smiles("[O-]C").atom(0).charge, -1);
  EXPECT_EQ(parse_smiles("[Fe++]").atom(0).charge, 2);
  EXPECT_EQ(parse_smiles("c1cc[nH]c1").atom(3).explicit_hydrogens, 1);
  EXPECT_EQ(parse_smiles("C%12CC%12").bond_count(), 3u);
  EXPECT_EQ(parse_smiles("ClCBr").atom(2).element, "Br");
}

TEST(Smiles, Errors) {
  auto kind_of = [](const char* text) {
    try {
      parse_smiles(text);
    } catch (const SmilesError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no error for " << text;
    return SmilesError::Kind::kSyntax;
  };
  EXPECT_EQ(kind_of(""), SmilesError::Kind::kSyntax);
  EXPECT_EQ(kind_of("CC(C"), SmilesError::Kind::kSyntax);
  EXPECT_EQ(kind_of("CC)C"), SmilesError::Kind::kSyntax);
  EXPECT_EQ(kind_of("C1CC"), SmilesError::Kind::kSyntax);
  EXPECT_EQ(kind_of("CC="), SmilesError::Kind::kSyntax);
  EXPECT_EQ(kind_of("C[Xx]"), SmilesError::Kind::kSyntax);
  EXPECT_EQ(kind_of("F/C=C/F"), SmilesError::Kind::kUnsupported);
  EXPECT_EQ(kind_of("N[C@@H](C)C(=O)O"), SmilesError::Kind::kUnsupported);
  EXPECT_EQ(kind_of("[13CH4]"), SmilesError::Kind::kUnsupported);
  EXPECT_EQ(kind_of("CC.O"), SmilesError::Kind::kUnsupported);
  try {
    parse_smiles("CCC(C");
    FAIL();
  } catch (const SmilesError& e) {
    EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos);
  }
}

TEST(Morgan, ReindexingInvariance) {
  EXPECT_EQ(morgan_fingerprint(parse_smiles("OCC"), 2, 1024), morgan_fingerprint(parse_smiles("CCO"), 2, 1024));
  EXPECT_EQ(morgan_fingerprint(parse_smiles("c1ccccc1O"), 2, 1024),
            morgan_fingerprint(parse_smiles("Oc1ccccc1"), 2, 1024));
}

TEST(Morgan, RadiusZeroSingleBit) {
  const auto c = morgan_fingerprint(parse_smiles("C"), 0, 1024);
  const auto o = morgan_fingerprint(parse_smiles("O"), 0, 1024);
  EXPECT_EQ(c.popcount(), 1u);
  EXPECT_EQ(o.popcount(), 1u);
  EXPECT_NE(c, o);
}

TEST(Morgan, RadiusGrowsBits) {
  const auto mol = parse_smiles("CC(=O)Nc1ccc(O)cc1");
  EXPECT_LE(morgan_fingerprint(mol, 0, 1024).popcount(), morgan_fingerprint(mol, 1, 1024).popcount());
  EXPECT_LE(morgan_fingerprint(mol, 1, 1024).popcount(), morgan_fingerprint(mol, 2, 1024).popcount());
  EXPECT_EQ(morgan_fingerprint(mol, 2, 2048).width(), 2048u);
  EXPECT_THROW(morgan_fingerprint(mol, 2, 1000), InputError);
  EXPECT_THROW(morgan_fingerprint(mol, -1, 1024), InputError);
}

TEST(Morgan, PermutationInvariance) {
  std::mt19937_64 rng(11);
  for (const std::string& smi : synth::drug_like_smiles()) {
    const auto mol = parse_smiles(smi);
    const auto ref = morgan_fingerprint(mol, 2, 1024);
    for (int i = 0; i < 10; ++i) {
      std::vector<std::size_t> perm(mol.atom_count());
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      EXPECT_EQ(morgan_fingerprint(synth::permute_atoms(mol, perm), 2, 1024), ref) << smi;
    }
  }
}

TEST(Morgan, SimilarMoleculesScoreHigher) {
  const auto fp = [](const char* s) { return morgan_fingerprint(parse_smiles(s), 2, 1024); };
  EXPECT_GT(tanimoto(fp("CCCCCCO"), fp("CCCCCCCO")), tanimoto(fp("CCCCCCO"), fp("c1ccncc1")));
}

TEST(Csv, QuotesCrlfAndBom) {
  const auto rows = csv::parse("\xEF\xBB\xBF" "a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\r\n\r\nlast,\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].fields, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(rows[1].fields, (std::vector<std::string>{"x,1", "say \"hi\""}));
  EXPECT_EQ(rows[2].fields, (std::vector<std::string>{"last", ""}));
  EXPECT_EQ(rows[2].line, 4u);
  EXPECT_THROW(csv::parse("a,\"b\n"), CsvError);
  EXPECT_EQ(csv::escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv::format_double(0.1), "0.1");
  EXPECT_FALSE(csv::parse_double("1.5x").has_value());
}

TEST(Dataset, SmilesCsvHappyPath) {
  const Dataset ds = parse_dataset("id,smiles\na,CCO\nb,c1ccccc1\nc,CC(=O)O\n", DatasetFormat::kSmilesCsv);
  ASSERT_EQ(ds.size(), 3u);
  for (const Record& r : ds.records()) EXPECT_EQ(r.fingerprint.width(), 1024u);
  EXPECT_EQ(ds.index_of("b"), 1u);
  EXPECT_FALSE(ds.index_of("z").has_value());
}

TEST(Dataset, MixedWidthRejected) {
  const std::string text = "id,fp\na," + Fingerprint(1024).to_hex() + "\nb," + Fingerprint(512).to_hex() + "\n";
  try {
    parse_dataset(text, DatasetFormat::kFingerprintCsv);
    FAIL();
  } catch (const CsvError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("mixed fingerprint widths"), std::string::npos);
  }
}

TEST(Dataset, DuplicateIdNamed) {
  try {
    parse_dataset("id,smiles\naspirin,CCO\naspirin,CCN\n", DatasetFormat::kSmilesCsv);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("aspirin"), std::string::npos);
  }
}

TEST(Dataset, BadRowsReportLines) {
  EXPECT_THROW(parse_dataset("id,smiles,extra\na,C,1\n", DatasetFormat::kSmilesCsv), CsvError);
  EXPECT_THROW(parse_dataset("id,smiles\na,C(\n", DatasetFormat::kSmilesCsv), CsvError);
  EXPECT_THROW(parse_dataset("id,smiles,label\na,C,2\n", DatasetFormat::kSmilesCsv), CsvError);
  EXPECT_THROW(parse_dataset("id,smiles\na\n", DatasetFormat::kSmilesCsv), CsvError);
}

TEST(Dataset, WriteRoundTrip) {
  const Dataset ds = parse_dataset("id,smiles,value,label\na,CCO,6.5,1\nb,CCN,,0\n", DatasetFormat::kSmilesCsv);
  std::ostringstream out;
  write_dataset(out, ds);
  EXPECT_EQ(out.str(), "id,smiles,value,label\na,CCO,6.5,1\nb,CCN,,0\n");
  std::ostringstream fps;
  write_fingerprint_csv(fps, ds);
  const Dataset back = parse_dataset(fps.str(), DatasetFormat::kFingerprintCsv);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].fingerprint, ds[0].fingerprint);
  EXPECT_EQ(back[1].value, std::nullopt);
}

TEST(Activity, PChemblAndLabels) {
  EXPECT_DOUBLE_EQ(to_pchembl(1000), 6.0);
  EXPECT_DOUBLE_EQ(to_pchembl(100), 7.0);
  const Dataset ds = preprocess_activity({{"CCO", 1000, "="}, {"CCN", 100, "="}}, ActivityMode::kBinary);
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds[0].label, 0);  // exactly 6.0 is not active
  EXPECT_EQ(ds[1].label, 1);
  EXPECT_DOUBLE_EQ(*ds[0].value, 6.0);
  EXPECT_EQ(ds[0].id, "mol_0");
}

TEST(Activity, CensoredRowsInBinaryMode) {
  const Dataset ds = preprocess_activity({{"CCO", 20000, "<"},   // dropped
                                          {"CCN", 5000, "<"},    // active side, kept
                                          {"CCC", 50000, ">"},   // inactive side, kept
                                          {"CCS", 50, ">"}},     // dropped
                                         ActivityMode::kBinary);
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(*ds[0].smiles, "CCN");
  EXPECT_EQ(*ds[1].smiles, "CCC");
  EXPECT_EQ(ds[1].label, 0);
}

TEST(Activity, ContinuousDuplicates) {
  // pX 6.2 vs 7.5: range 1.3 > 1.0, group discarded.
  const double nm62 = std::pow(10.0, 9 - 6.2), nm75 = std::pow(10.0, 9 - 7.5);
  const double nm66 = std::pow(10.0, 9 - 6.6);
  const Dataset ds = preprocess_activity({{"CCO", nm62, "="}, {"CCO", nm75, "="},
                                          {"CCN", nm62, "="}, {"CCN", nm66, "="},
                                          {"CCC", 1, "="},      // pX 9, outside (5, 9)
                                          {"CCS", 100, "<"}},   // not exact
                                         ActivityMode::kContinuous);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(*ds[0].smiles, "CCN");
  EXPECT_NEAR(*ds[0].value, 6.4, 1e-12);
  EXPECT_FALSE(ds[0].label.has_value());
  EXPECT_THROW(preprocess_activity({{"CCC", 1, "="}}, ActivityMode::kContinuous), InputError);
}

TEST(Activity, ConflictingBinaryLabelsDropped) {
  const Dataset ds = preprocess_activity({{"CCO", 100, "="}, {"CCO", 50000, "="}, {"CCN", 10, "="}},
                                         ActivityMode::kBinary);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(*ds[0].smiles, "CCN");
}
