// Writes the fixture instances under data/.

#include <persuasion/corpus.hpp>
#include <persuasion/io.hpp>

using namespace persuasion;

int main(int argc, char** argv)
{
  const std::string d = argc > 1 ? argv[1] : "data";
  save_instance(d + "/prosecutor.json", corpus::prosecutor());
  save_instance(d + "/investor.json", corpus::investor());
  save_instance(d + "/investor_bounded.json", corpus::investor_bounded());
  save_instance(d + "/rain_point.json", corpus::rain_point(0.1));
  save_instance(d + "/rain_shine.json", corpus::rain_shine(0.1));
  save_instance(d + "/three_action.json", corpus::three_action(0.1));
  save_instance(d + "/three_action_prime.json", corpus::three_action_prime(0.1));
}
