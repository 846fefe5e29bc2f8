// Copyright 2026 The ldsc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ldsc/corpus/dataset.hpp"
#include "ldsc/corpus/dialogue_act.hpp"
#include "ldsc/errors.hpp"
#include "ldsc/numerics/rng.hpp"

namespace ldsc {

// Desk-scale restaurant-search corpora generated from templates. Every
// reference is a deterministic function of its MR, so a model can in
// principle reproduce the training set exactly.
//
//   basic    offers, requests, apologies, phone numbers, confirmations
//   article  "a" / "an" before each value depends on the value's first
//            letter, so a model that ignores lexical values must guess
namespace synth {

struct ValuePool {
  std::vector<std::string_view> names;
  std::vector<std::string_view> foods;
  std::vector<std::string_view> areas;
  std::vector<std::string_view> prices;
  std::vector<std::string_view> phones;
};

inline const ValuePool& basic_values() {
  static const ValuePool pool{
      {"super ramen", "golden dragon", "bella italia", "curry house",
       "the plaza grill", "green leaf", "blue moon cafe", "royal spice"},
      {"pizza", "sushi", "thai", "indian", "chinese", "italian", "french",
       "korean"},
      {"north", "south", "east", "west", "centre"},
      {"cheap", "moderate", "expensive"},
      {"01223 356555", "01223 412299", "01223 307581", "01223 351707"}};
  return pool;
}

inline const ValuePool& article_values() {
  static const ValuePool pool{
      {"super ramen", "golden dragon", "bella italia", "curry house",
       "green leaf", "royal spice"},
      {"indian", "italian", "english", "ethiopian", "austrian", "apple pie",
       "pizza", "thai", "chinese", "french", "korean", "spanish"},
      {"east side", "old town", "uptown", "inner city", "north end",
       "riverside", "city centre", "harbour front"},
      {"affordable", "expensive", "upscale", "average", "cheap", "moderate",
       "reasonable", "budget"},
      {}};
  return pool;
}

inline std::string_view pick(Rng& rng, const std::vector<std::string_view>& v) {
  return v[rng.below(v.size())];
}

inline bool starts_with_vowel(std::string_view value) {
  return !value.empty() &&
         std::string_view("aeiou").find(value.front()) != std::string_view::npos;
}

inline std::string_view article_for(std::string_view value) {
  return starts_with_vowel(value) ? "an" : "a";
}

class Builder {
 public:
  void act(std::string act, std::string slot, std::string_view value = {}) {
    mr_.acts.push_back({std::move(act), std::move(slot), tokenize(value)});
  }
  void say(std::string_view words) {
    for (auto& t : tokenize(words)) text_.push_back(std::move(t));
  }
  Example finish(std::size_t index) {
    return make_example(std::move(mr_), std::move(text_),
                        "s" + std::to_string(index));
  }

 private:
  MeaningRepresentation mr_;
  Tokens text_;
};

inline Example basic_example(Rng& rng, std::size_t index) {
  const ValuePool& pool = basic_values();
  Builder b;
  switch (rng.below(5)) {
    case 0:
    case 1: {
      const auto name = pick(rng, pool.names);
      const bool food = rng.bernoulli(0.6);
      const bool area = rng.bernoulli(0.5);
      const bool price = rng.bernoulli(0.4);
      b.act("OFFER", "NAME", name);
      b.say(name);
      b.say("is a nice restaurant");
      if (food) {
        const auto v = pick(rng, pool.foods);
        b.act("INFORM", "FOOD", v);
        b.say("serving");
        b.say(v);
        b.say("food");
      }
      if (area) {
        const auto v = pick(rng, pool.areas);
        b.act("INFORM", "AREA", v);
        b.say("in the");
        b.say(v);
        b.say("of town");
      }
      if (price) {
        const auto v = pick(rng, pool.prices);
        b.act("INFORM", "PRICERANGE", v);
        b.say("and the prices are");
        b.say(v);
      }
      b.say(".");
      break;
    }
    case 2: {
      switch (rng.below(3)) {
        case 0:
          b.act("REQUEST", "FOOD");
          b.say("what kind of food would you like ?");
          break;
        case 1:
          b.act("REQUEST", "AREA");
          b.say("what part of town do you have in mind ?");
          break;
        default:
          b.act("REQUEST", "PRICERANGE");
          b.say("what price range are you looking for ?");
          break;
      }
      break;
    }
    case 3: {
      const auto food = pick(rng, pool.foods);
      b.act("CANTHELP", "FOOD", food);
      b.say("sorry , there is no");
      b.say(food);
      b.say("restaurant");
      if (rng.bernoulli(0.5)) {
        const auto area = pick(rng, pool.areas);
        b.act("CANTHELP", "AREA", area);
        b.say("in the");
        b.say(area);
        b.say("of town");
      }
      b.say(".");
      break;
    }
    default: {
      if (rng.bernoulli(0.5)) {
        const auto name = pick(rng, pool.names);
        const auto phone = pick(rng, pool.phones);
        b.act("INFORM", "NAME", name);
        b.act("INFORM", "PHONE", phone);
        b.say("the phone number of");
        b.say(name);
        b.say("is");
        b.say(phone);
        b.say(".");
      } else {
        const auto food = pick(rng, pool.foods);
        b.act("EXPLICIT_CONFIRMATION", "FOOD", food);
        b.say("you are looking for");
        b.say(food);
        b.say("food , right ?");
      }
      break;
    }
  }
  return b.finish(index);
}

inline Example article_example(Rng& rng, std::size_t index) {
  const ValuePool& pool = article_values();
  Builder b;
  if (rng.below(4) == 0) {
    const auto food = pick(rng, pool.foods);
    b.act("CANTHELP", "FOOD", food);
    b.say("sorry , i can not find");
    b.say(article_for(food));
    b.say(food);
    b.say("restaurant .");
    return b.finish(index);
  }
  const auto name = pick(rng, pool.names);
  const auto food = pick(rng, pool.foods);
  b.act("OFFER", "NAME", name);
  b.act("INFORM", "FOOD", food);
  b.say(name);
  b.say("serves");
  b.say(article_for(food));
  b.say(food);
  b.say("menu");
  if (rng.bernoulli(0.5)) {
    const auto area = pick(rng, pool.areas);
    b.act("INFORM", "AREA", area);
    b.say("in");
    b.say(article_for(area));
    b.say(area);
    b.say("neighbourhood");
  }
  if (rng.bernoulli(0.5)) {
    const auto price = pick(rng, pool.prices);
    b.act("INFORM", "PRICERANGE", price);
    b.say("at");
    b.say(article_for(price));
    b.say(price);
    b.say("price");
  }
  b.say(".");
  return b.finish(index);
}

}  // namespace synth

inline Dataset synth_corpus(std::uint64_t seed, std::size_t size,
                            const std::string& grammar_id) {
  if (size < 1) throw ConfigError("synthetic corpus size must be at least 1");
  Rng rng(seed);
  std::vector<Example> examples;
  examples.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    if (grammar_id == "basic") {
      examples.push_back(synth::basic_example(rng, i));
    } else if (grammar_id == "article") {
      examples.push_back(synth::article_example(rng, i));
    } else {
      throw UnknownGrammar(grammar_id);
    }
  }
  return make_dataset(std::move(examples), Schema::restaurant());
}

// Review-style sentences for auto-encoder pretraining. Some mention the
// topic keywords often, some not at all.
inline std::vector<std::string> synth_review_sentences(std::uint64_t seed,
                                                       std::size_t count) {
  static const std::vector<std::string_view> openers = {
      "the food was", "the restaurant was", "the area is", "the price was",
      "the staff were", "our table was", "the dessert was", "the wine was"};
  static const std::vector<std::string_view> adjectives = {
      "nice", "great", "fine", "lovely", "average", "cheap", "expensive",
      "cold", "fresh", "quiet"};
  static const std::vector<std::string_view> tails = {
      "and we will book again .",
      "but the phone line was busy .",
      "and the address was easy to find .",
      "so we made a reservation for friday .",
      "and the postcode on the website is wrong .",
      ".",
      "and the music was loud .",
      "and we walked home after dinner ."};
  Rng rng(seed);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string s(synth::pick(rng, openers));
    s += " ";
    s += synth::pick(rng, adjectives);
    s += " ";
    s += synth::pick(rng, tails);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace ldsc
