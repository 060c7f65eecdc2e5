#include <gtest/gtest.h>

#include "iormon/errors.hpp"
#include "iormon/schema.hpp"

namespace iormon {
namespace {

Column numeric(std::string name, double lo, double hi) {
  return Column{.name = std::move(name), .kind = ColumnKind::kNumeric, .lower = lo, .upper = hi};
}

TEST(SchemaTest, AllNumericNamesColumns) {
  const Schema s = Schema::all_numeric(3);
  EXPECT_EQ(s.dimension(), 3u);
  EXPECT_EQ(s.column(2).name, "x2");
  EXPECT_EQ(s.numeric_columns(), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_TRUE(s.categorical_columns().empty());
  EXPECT_EQ(s.label_column(), "label");
}

TEST(SchemaTest, RejectsDuplicatesAndBadBounds) {
  EXPECT_THROW(Schema({numeric("a", 0, 1), numeric("a", 0, 1)}), SchemaError);
  EXPECT_THROW(Schema({numeric("a", 1, 1)}), SchemaError);
  EXPECT_THROW(Schema({Column{.name = "c", .kind = ColumnKind::kCategorical}}), SchemaError);
  EXPECT_THROW(Schema({Column{.name = "i", .kind = ColumnKind::kIgnored}}), SchemaError);
  EXPECT_THROW(Schema({numeric("label", 0, 1)}), SchemaError);
}

TEST(SchemaTest, UnboundedNumericColumnIsAllowed) {
  const Schema s({Column{.name = "x"}});
  EXPECT_FALSE(s.column(0).bounded());
}

TEST(SchemaTest, CategoryLookupAndProjection) {
  const Schema s({numeric("age", 0, 120),
                  Column{.name = "sex", .kind = ColumnKind::kCategorical, .categories = {"f", "m"}},
                  Column{.name = "id", .kind = ColumnKind::kIgnored}});
  EXPECT_EQ(s.category_index(1, "m"), 1u);
  EXPECT_THROW(s.category_index(1, "x"), SchemaError);
  EXPECT_EQ(s.find("sex"), std::optional<std::size_t>(1));
  EXPECT_FALSE(s.find("nope").has_value());
  const Schema p = s.project({1, 0});
  EXPECT_EQ(p.column(0).name, "sex");
  EXPECT_EQ(p.column(1).name, "age");
}

}  // namespace
}  // namespace iormon
