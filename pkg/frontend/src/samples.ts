// Built-in starting points so the loop can be tried without a dataset.

export interface Sample {
  name: string;
  dot: string;
  hint: string;
}

export const SAMPLES: Sample[] = [
  {
    name: "see an alligator (order bug)",
    hint: "Get in a car before driving",
    dot: `digraph "see an alligator" {
  "find the keys"
  "drive to the zoo"
  "get in car"
  "park the car"
  "walk to the enclosure"
  "find the keys" -> "drive to the zoo"
  "drive to the zoo" -> "get in car"
  "get in car" -> "park the car"
  "park the car" -> "walk to the enclosure"
}`,
  },
  {
    name: "make cards (redundant step)",
    hint: "good plans shouldn't include redundant steps",
    dot: `digraph "make a bunch of cards" {
  "grab a pen"
  "grab some paper"
  "pick up a pen"
  "place the paper on the table"
  "pick up the pen"
  "write names on the cards"
  "grab a pen" -> "grab some paper"
  "grab some paper" -> "pick up a pen"
  "pick up a pen" -> "place the paper on the table"
  "place the paper on the table" -> "pick up the pen"
  "pick up the pen" -> "write names on the cards"
}`,
  },
  {
    name: "take blanket out (missing step)",
    hint: "a person needs to open the door before they take an object out",
    dot: `digraph "wrap up in a blanket" {
  "get out of car"
  "walk to house"
  "open front door"
  "take blanket out of car"
  "carry blanket inside"
  "sit on the couch"
  "throw blanket down"
  "get out of car" -> "walk to house"
  "walk to house" -> "open front door"
  "open front door" -> "take blanket out of car"
  "take blanket out of car" -> "carry blanket inside"
  "carry blanket inside" -> "sit on the couch"
  "sit on the couch" -> "throw blanket down"
}`,
  },
];
