#include "task_pool.hpp"

namespace prefvec::detail {

const std::vector<TaskTemplate>& task_pool() {
  static const std::vector<TaskTemplate> pool = {
      {"breakfast",
       {"List three healthy breakfast ideas.",
        "Here are three healthy breakfast ideas that are easy to prepare on a busy morning and keep you full until lunch.",
        {"Oatmeal with berries", "Greek yogurt with nuts", "Whole-grain toast with eggs"},
        {"slow-release carbohydrates and fiber from the oats combine with antioxidants from fresh or frozen berries",
         "a high-protein base with healthy fats from almonds or walnuts, sweetened lightly with honey if you like",
         "complex carbohydrates from the bread and complete protein from the eggs, ready in under ten minutes"},
        "Rotating between these options during the week keeps breakfast interesting while covering protein, fiber and healthy fats."},
       {"列出三个健康的早餐建议。",
        "下面是三个健康的早餐建议，准备起来很简单，适合忙碌的早晨，并且能让你一直饱到午饭时间。",
        {"燕麦配浆果", "希腊酸奶配坚果", "全麦吐司配鸡蛋"},
        {"燕麦提供缓慢释放的碳水化合物和丰富的膳食纤维，新鲜或冷冻的浆果则带来大量抗氧化物质和天然的甜味",
         "希腊酸奶蛋白质含量很高，再加上一把杏仁或核桃补充健康脂肪，喜欢的话可以淋一点蜂蜜调味",
         "全麦面包提供复合碳水化合物，鸡蛋提供优质完整的蛋白质，整份早餐十分钟以内就可以准备好"},
        "一周之内轮流选择这几种早餐，既能保持新鲜感，又能均衡摄入蛋白质、膳食纤维和健康脂肪。"}},
      {"capital",
       {"What is the capital of France?",
        "The capital of France is Paris, which is also the country's largest city and its political and cultural center.",
        {"Paris is the capital of France", "It lies on the Seine river", "It hosts the national government"},
        {"it has served as the seat of French power for most of the last thousand years",
         "the river divides the city into the Left Bank and the Right Bank, joined by dozens of bridges",
         "the president works from the Elysee Palace and both houses of parliament meet in the city"},
        "Paris is also famous for landmarks such as the Eiffel Tower, the Louvre museum and the Notre-Dame cathedral."},
       {"法国的首都是哪里？",
        "法国的首都是巴黎，它也是法国最大的城市，以及全国的政治、经济和文化中心。",
        {"巴黎是法国的首都", "巴黎位于塞纳河畔", "法国中央政府设在巴黎"},
        {"在过去大约一千年的大部分时间里，巴黎一直是法国的权力中心和王室所在地",
         "塞纳河把城市分成左岸和右岸两部分，河上有几十座风格各异的桥梁连接两岸",
         "总统在爱丽舍宫办公，国民议会和参议院也都在巴黎开会并处理国家事务"},
        "巴黎还以埃菲尔铁塔、卢浮宫博物馆和巴黎圣母院等著名地标而闻名世界，每年吸引大量游客。"}},
      {"sleep",
       {"List three tips for better sleep.",
        "Here are three practical tips for better sleep that are backed by sleep research and simple to adopt.",
        {"Keep a regular schedule", "Limit screens before bed", "Keep the bedroom cool and dark"},
        {"going to bed and waking up at the same time every day stabilizes your internal body clock",
         "blue light from phones and laptops delays melatonin release, so switch them off an hour earlier",
         "a temperature around eighteen degrees and blackout curtains make it easier to stay asleep"},
        "Small changes applied consistently for a few weeks usually matter more than any single dramatic change."},
       {"列出三个改善睡眠的建议。",
        "下面是三个改善睡眠的实用建议，它们都有睡眠研究的支持，而且在日常生活中很容易做到。",
        {"保持规律作息", "睡前少看屏幕", "让卧室凉爽且黑暗"},
        {"每天在同一时间上床睡觉和起床，可以稳定身体的生物钟，让入睡和醒来都变得更加自然轻松",
         "手机和电脑发出的蓝光会推迟褪黑素的分泌，所以最好在睡前一小时关掉这些电子设备",
         "把室温保持在十八度左右，再配上遮光窗帘，可以让人更容易入睡，也更不容易在半夜醒来"},
        "坚持几个星期的小改变，通常比任何一次性的巨大改变都更有效，也更容易长期保持下去。"}},
      {"money",
       {"List three ways to save money.",
        "Here are three reliable ways to save money without making your daily life feel restrictive.",
        {"Track your spending", "Cook at home more often", "Automate your savings"},
        {"writing down every purchase for a month reveals where money quietly disappears each week",
         "home-cooked meals typically cost a third of restaurant prices and leftovers cover the next lunch",
         "a standing transfer on payday moves money to savings before you have a chance to spend it"},
        "Combining all three habits compounds over time and builds a cushion for unexpected expenses."},
       {"列出三个省钱的方法。",
        "下面是三个可靠的省钱方法，它们不会让你的日常生活变得过于拘束，也很容易坚持。",
        {"记录每一笔开销", "多在家做饭", "自动储蓄"},
        {"坚持记录一个月的每一笔消费，就能清楚地看到钱每周都在不知不觉中花到了哪里",
         "在家做饭的花费通常只有餐馆价格的三分之一，剩下的饭菜还可以当作第二天的午餐",
         "在发工资当天设置自动转账，把一部分钱先存起来，这样就不会在不经意间把它花掉"},
        "把这三个习惯结合起来，效果会随着时间不断累积，也能为意外开支准备一笔应急资金。"}},
      {"photosynthesis",
       {"What is photosynthesis?",
        "Photosynthesis is the process plants, algae and some bacteria use to turn light energy into chemical energy.",
        {"It captures sunlight", "It converts carbon dioxide and water", "It releases oxygen"},
        {"chlorophyll in the chloroplasts absorbs mainly red and blue light to power the reaction",
         "the captured energy builds glucose from carbon dioxide in the air and water from the roots",
         "oxygen is released as a by-product, which is the source of most oxygen in the atmosphere"},
        "Almost every food chain on Earth ultimately depends on the sugars produced by photosynthesis."},
       {"什么是光合作用？",
        "光合作用是植物、藻类和一些细菌利用光能，把二氧化碳和水转化为化学能的过程。",
        {"吸收阳光", "转化二氧化碳和水", "释放氧气"},
        {"叶绿体中的叶绿素主要吸收红光和蓝光，为整个光合作用反应提供所需要的能量",
         "吸收的能量被用来把空气中的二氧化碳和根部吸收的水分合成为葡萄糖等有机物",
         "这个过程会释放氧气作为副产品，地球大气中的大部分氧气都来自于光合作用"},
        "地球上几乎所有的食物链，归根结底都依赖于光合作用所产生的糖类和能量。"}},
      {"rain",
       {"What causes rain?",
        "Rain is part of the water cycle and forms when water vapor in the air cools and condenses into droplets.",
        {"Water evaporates", "Vapor cools and condenses", "Droplets grow and fall"},
        {"the sun heats oceans, lakes and plants, sending water vapor up into the atmosphere",
         "rising air cools with altitude and the vapor condenses on tiny dust particles to form clouds",
         "droplets collide and merge until they are heavy enough to overcome rising air currents"},
        "Mountains, weather fronts and strong daytime heating are the usual triggers that lift moist air."},
       {"为什么会下雨？",
        "下雨是水循环的一部分，当空气中的水汽冷却并凝结成小水滴时，就会形成降雨。",
        {"水分蒸发", "水汽冷却凝结", "水滴变大落下"},
        {"太阳加热海洋、湖泊和植物，使大量的水分变成水汽，随着上升的空气进入大气层",
         "上升的空气随着高度增加而冷却，水汽凝结在微小的尘埃颗粒上，逐渐形成了云",
         "云中的小水滴不断碰撞合并，直到变得足够重，能够克服上升气流，最后落到地面"},
        "山脉、天气锋面和白天的强烈加热，通常是把潮湿空气抬升起来并引发降雨的主要原因。"}},
      {"exercise",
       {"List three benefits of regular exercise.",
        "Here are three well-documented benefits of regular exercise for both body and mind.",
        {"Stronger heart", "Better mood", "Improved sleep"},
        {"aerobic activity lowers resting heart rate and blood pressure and improves cholesterol levels",
         "exercise releases endorphins and reduces stress hormones, easing symptoms of anxiety",
         "people who exercise fall asleep faster and spend more time in deep, restorative sleep"},
        "Even thirty minutes of brisk walking on most days delivers a large share of these benefits."},
       {"列出规律运动的三个好处。",
        "下面是规律运动对身体和心理健康的三个有充分研究支持的好处，值得每个人了解。",
        {"心脏更强健", "心情更好", "睡眠更好"},
        {"有氧运动可以降低静息心率和血压，还能改善胆固醇水平，从而减少心血管疾病的风险",
         "运动会促进内啡肽的释放，并减少压力激素，从而缓解焦虑情绪，让人感觉更加轻松愉快",
         "经常运动的人入睡更快，深度睡眠的时间也更多，第二天起床后精力会更加充沛"},
        "大多数日子里坚持三十分钟左右的快走，就能获得这些好处中的很大一部分，门槛并不高。"}},
      {"moon",
       {"What is the Moon made of?",
        "The Moon is a rocky body whose composition is similar to the outer layers of Earth, with a few differences.",
        {"A rocky crust", "A thick mantle", "A small iron core"},
        {"the crust is rich in oxygen, silicon, aluminum and calcium, forming bright highlands and dark basalt plains",
         "the mantle is made of dense silicate rock and partially melted early in the history of the Moon",
         "seismic data suggest a small iron-rich core only a few hundred kilometers across"},
        "Samples returned by the Apollo missions show that lunar rocks contain almost no water."},
       {"月球是由什么构成的？",
        "月球是一个岩石天体，它的成分和地球外层的成分很相似，但也存在一些明显的差别。",
        {"岩石月壳", "厚厚的月幔", "较小的铁质月核"},
        {"月壳富含氧、硅、铝和钙等元素，形成了明亮的高地和暗色的玄武岩平原，也就是月海",
         "月幔由致密的硅酸盐岩石构成，在月球历史的早期曾经发生过部分熔融和大规模的火山活动",
         "地震数据表明，月球中心有一个富含铁的小型月核，直径只有几百公里，比地核小得多"},
        "阿波罗任务带回的月球样品显示，月球岩石中几乎不含水，这和地球岩石有很大的不同。"}},
  };
  return pool;
}

const TaskTemplate* find_task(std::string_view text) {
  for (const auto& t : task_pool()) {
    if (text.find(t.en.prompt) != std::string_view::npos || text.find(t.zh.prompt) != std::string_view::npos)
      return &t;
  }
  return nullptr;
}

const TaskTemplate* task_by_tag(std::string_view tag) {
  for (const auto& t : task_pool()) {
    if (t.tag == tag) return &t;
  }
  return nullptr;
}

}  // namespace prefvec::detail
